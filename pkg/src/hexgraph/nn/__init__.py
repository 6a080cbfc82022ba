from . import tensor  # noqa: F401
from .gradcheck import grad_check  # noqa: F401
from .layers import (  # noqa: F401
    MLP,
    Conv1x1,
    Conv3x3,
    Dense,
    Module,
    ResidualBlock,
    SageConv,
    SageStack,
    readout,
)
from .optim import Adam  # noqa: F401
from .tensor import Tensor, no_grad  # noqa: F401
