from ._fkt import *  # noqa: F401,F403
