from ._spinflow import *  # noqa: F401,F403
from ._spinflow import __version__  # noqa: F401
