from .config import settings
from .logger import logger
from .exceptions import (
    FracSpecError,
    InvalidParameterError,
    InvalidGridError,
    DegenerateInputError,
    InvalidInputError,
    UnsupportedModeError,
    UnsupportedError,
    NumericalFailureError,
    ConfigError,
    DegenerateDirectionWarning,
)
from .parallel import ordered_map
