from ._incmatch import *  # noqa: F401,F403
