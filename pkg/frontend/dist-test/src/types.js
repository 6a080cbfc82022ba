// Payload shapes of the game service API.
export {};
