"""Seed-driven synthetic corpus/trace generation, validation, and benchmarks."""

from _seedgen import *  # noqa: F401,F403
from _seedgen import __doc__  # noqa: F401
