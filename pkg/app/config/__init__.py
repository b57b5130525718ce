from .settings import settings
from .constants import U_RANGE, U_SAMPLES, FLOAT_FORMAT
