"""Hex on Shannon vertex-switching graphs: engines, networks, self-play training."""

__version__ = "0.1.0"

from .board import Cell, Color, HexBoard, new_board, play, winner  # noqa: F401
from .shannon import GameStatus, Player, ShannonGraph, from_board  # noqa: F401
