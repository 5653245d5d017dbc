"""Chaotic lossless image cipher for baseline JPEG and GIF."""

try:
    from ._bakercrypt import *  # noqa: F401,F403  (installed wheel layout)
except ImportError:  # in-tree builds leave the module next to the package
    from _bakercrypt import *  # noqa: F401,F403
