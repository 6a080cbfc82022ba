"""Network architectures and checkpoint persistence.

Three models share the package:

* GraphQModel -- dueling Q-network over Shannon graphs. A SAGE body feeds a
  per-node advantage head (scaled tanh, range [-2, 2]) and a readout+MLP value
  head (tanh, range [-1, 1]); each head keeps separate parameter sets for the
  Short and the Cut mover. Q(s, a) = V(s) + A(s, a) - max_a A(s, a).
* GraphPVModel -- same body, advantage head swapped for a softmax policy head;
  policy and value outputs are independent.
* ConvQModel -- fully convolutional Q baseline over stone planes (input conv,
  residual tower, 1x1 Q-head, scaled tanh); no dense layer, so one set of
  weights serves any board size.
"""

from __future__ import annotations

import base64
import hashlib
import json
from dataclasses import asdict, dataclass
from typing import Optional, Union

import numpy as np

from . import board as hexboard
from .board import HexBoard
from .errors import FormatError, InvalidStateError
from .nn import MLP, Adam, Conv1x1, Conv3x3, Module, ResidualBlock, SageStack, readout
from .nn import tensor as T
from .nn.tensor import Tensor
from .shannon import GraphEncoding, Player

CHECKPOINT_VERSION = 1


@dataclass
class GraphQConfig:
    body_layers: int = 8
    width: int = 32
    adv_layers: int = 2
    value_hidden: tuple = (64, 32)
    in_features: int = 2

    @classmethod
    def desk(cls) -> "GraphQConfig":
        return cls()

    @classmethod
    def reference(cls) -> "GraphQConfig":
        return cls(body_layers=15, width=64)


@dataclass
class GraphPVConfig(GraphQConfig):
    pass


@dataclass
class ConvQConfig:
    channels: int = 23
    blocks: int = 4
    in_planes: int = 4
    padding: bool = True

    @classmethod
    def desk(cls) -> "ConvQConfig":
        return cls()

    @classmethod
    def reference(cls) -> "ConvQConfig":
        return cls(channels=32, blocks=10)


def _per_player(build):
    return {Player.SHORT: build(), Player.CUT: build()}


class _GraphModelBase(Module):
    def __init__(self, config: GraphQConfig, rng: np.random.Generator, dtype=np.float32):
        self.config = config
        w = config.width
        self.body = SageStack([config.in_features] + [w] * config.body_layers, rng, dtype=dtype)
        head_widths = [w] * config.adv_layers + [1]
        self.node_head_short = SageStack(head_widths, rng, out_activation=self._node_head_activation(),
                                         final=True, dtype=dtype)
        self.node_head_cut = SageStack(head_widths, rng, out_activation=self._node_head_activation(),
                                       final=True, dtype=dtype)
        value_widths = [4 * w, *config.value_hidden, 1]
        self.value_head_short = MLP(value_widths, rng, out_activation="tanh", final=True, dtype=dtype)
        self.value_head_cut = MLP(value_widths, rng, out_activation="tanh", final=True, dtype=dtype)

    @staticmethod
    def _node_head_activation() -> Optional[str]:
        raise NotImplementedError

    def _heads(self, player: Player):
        if player is Player.SHORT:
            return self.node_head_short, self.value_head_short
        return self.node_head_cut, self.value_head_cut

    def _trunk(self, enc: GraphEncoding):
        playable = enc.playable_ids()
        if len(playable) == 0:
            raise InvalidStateError("graph has only terminal nodes")
        feats = Tensor(enc.features.astype(self.dtype()))
        T.check_finite(feats, "graph features")
        src, dst = enc.edge_index
        h = self.body(feats, src, dst)
        node_head, value_head = self._heads(enc.to_move)
        per_node = T.reshape(node_head(h, src, dst), (-1,))
        value = T.reshape(value_head(T.reshape(readout(h), (1, -1))), ())
        return per_node, value, playable

    def dtype(self):
        return self.body.layers[0].w_self.data.dtype


class GraphQModel(_GraphModelBase):
    arch = "graph_q"

    @staticmethod
    def _node_head_activation() -> Optional[str]:
        return "tanh2"

    def q_tensors(self, enc: GraphEncoding):
        """Tensor-land forward for training: per-playable-node Q, V, A."""
        adv, value, playable = self._trunk(enc)
        adv_playable = T.gather_rows(adv, playable)
        q = T.add(T.add(adv_playable, value), T.mul(T.tmax0(adv_playable), -1.0))
        return q, value, adv, playable

    def q_values(self, enc: GraphEncoding):
        """Numpy forward: (Q, V, A); Q is -inf on terminal nodes."""
        with T.no_grad():
            q, value, adv, playable = self.q_tensors(enc)
        q_full = np.full(enc.num_nodes, -np.inf, dtype=np.float32)
        q_full[playable] = q.data
        return q_full, float(value.data), adv.data.copy()


class GraphPVModel(_GraphModelBase):
    arch = "graph_pv"

    @staticmethod
    def _node_head_activation() -> Optional[str]:
        return None

    def pv_tensors(self, enc: GraphEncoding):
        """(playable logits, value, playable ids) for loss construction."""
        logits, value, playable = self._trunk(enc)
        return T.gather_rows(logits, playable), value, playable

    def policy_value(self, enc: GraphEncoding):
        """Numpy forward: probabilities over playable nodes (by node id) and value."""
        with T.no_grad():
            logits, value, playable = self.pv_tensors(enc)
            probs = T.softmax(logits)
        pi = np.zeros(enc.num_nodes, dtype=np.float32)
        pi[playable] = probs.data
        return pi, float(value.data)


class ConvQModel(Module):
    arch = "conv_q"

    def __init__(self, config: ConvQConfig, rng: np.random.Generator, dtype=np.float32):
        self.config = config
        c = config.channels
        self.conv_in = Conv3x3(config.in_planes, c, rng, activation="relu", dtype=dtype)
        self.blocks = [ResidualBlock(c, rng, dtype=dtype) for _ in range(config.blocks)]
        self.q_head = Conv1x1(c, 1, rng, activation="tanh2", final=True, dtype=dtype)

    def dtype(self):
        return self.conv_in.w.data.dtype

    def q_planes(self, planes: np.ndarray) -> Tensor:
        """(B, 4, H, W) planes -> (B, H, W) Q map (no masking, no crop)."""
        x = Tensor(planes.astype(self.dtype()))
        T.check_finite(x, "input planes")
        h = self.conv_in(x)
        for block in self.blocks:
            h = block(h)
        return T.reshape(self.q_head(h), planes.shape[0:1] + planes.shape[2:])

    def q_board(self, board: HexBoard) -> np.ndarray:
        """Q per cell for one position; occupied cells are -inf."""
        planes = hexboard.encode_planes(board, padding=self.config.padding)
        with T.no_grad():
            q = self.q_planes(planes[None]).data[0]
        if self.config.padding:
            q = q[1:-1, 1:-1]
        q = q.astype(np.float32).copy()
        q[board.cells != hexboard.EMPTY] = -np.inf
        return q


GraphModel = Union[GraphQModel, GraphPVModel]
AnyModel = Union[GraphQModel, GraphPVModel, ConvQModel]

_ARCHES = {
    "graph_q": (GraphQConfig, GraphQModel),
    "graph_pv": (GraphPVConfig, GraphPVModel),
    "conv_q": (ConvQConfig, ConvQModel),
}


def build_model(arch: str, config=None, seed: int = 0, dtype=np.float32) -> AnyModel:
    if arch not in _ARCHES:
        raise FormatError(f"unknown architecture {arch!r}")
    config_cls, model_cls = _ARCHES[arch]
    if config is None:
        config = config_cls.desk()
    elif isinstance(config, dict):
        cfg = dict(config)
        if "value_hidden" in cfg:
            cfg["value_hidden"] = tuple(cfg["value_hidden"])
        config = config_cls(**cfg)
    return model_cls(config, np.random.default_rng(seed), dtype=dtype)


def _params_blob(model: Module) -> dict:
    out = {}
    for name, p in sorted(model.named_parameters()):
        raw = np.ascontiguousarray(p.data.astype("<f4"))
        out[name] = {
            "shape": list(p.data.shape),
            "data_b64": base64.b64encode(raw.tobytes()).decode("ascii"),
        }
    return out


def content_hash(model: Module) -> str:
    digest = hashlib.sha256()
    for name, p in sorted(model.named_parameters()):
        digest.update(name.encode())
        digest.update(np.ascontiguousarray(p.data.astype("<f4")).tobytes())
    return digest.hexdigest()


def save(model: AnyModel, path, meta: Optional[dict] = None) -> None:
    doc = {
        "format_version": CHECKPOINT_VERSION,
        "arch": {"type": model.arch, **asdict(model.config)},
        "params": _params_blob(model),
        "meta": {**(meta or {}), "content_hash": content_hash(model)},
    }
    with open(path, "w") as fh:
        json.dump(doc, fh)


def load(path, dtype=np.float32) -> AnyModel:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"unreadable checkpoint {path}: {exc}") from exc
    version = doc.get("format_version")
    if version != CHECKPOINT_VERSION:
        raise FormatError(f"unsupported checkpoint format_version {version!r}")
    arch = dict(doc["arch"])
    arch_type = arch.pop("type")
    model = build_model(arch_type, arch, dtype=dtype)
    state = {}
    try:
        for name, entry in doc["params"].items():
            raw = base64.b64decode(entry["data_b64"])
            state[name] = np.frombuffer(raw, dtype="<f4").reshape(entry["shape"]).astype(dtype)
    except (KeyError, ValueError) as exc:
        raise FormatError(f"corrupt checkpoint {path}: {exc}") from exc
    model.load_state_dict(state)
    model.meta = dict(doc.get("meta", {}))
    return model
