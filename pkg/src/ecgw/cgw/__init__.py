"""Double-category layer: squares, complements, star-pushouts, cubes and audits."""

from .core import *  # noqa: F401,F403
from .squares import *  # noqa: F401,F403
from .cubes import *  # noqa: F401,F403
from .gen import *  # noqa: F401,F403
from .axioms import AXIOM_CHECKS, audit  # noqa: F401
from .appendix import APPENDIX_CHECKS, appendix_audit  # noqa: F401
