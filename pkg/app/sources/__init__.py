from .base import SourceTerm, eval_f, eval_F
from .power import PowerSum, EigenScaled, NoReaction
from .tabulated import Tabulated
from .parser import parse_source, needs_eigenvalue
from .osgood import osgood_test
