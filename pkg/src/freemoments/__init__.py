"""Exact moment sequences of main characters of free quantum groups and
finitely generated groups, with freeness checks built on them."""

from .errors import InvalidInputError, RegimeError, ResourceError
from .partitions import Partition, PartitionClass, color_word, count, enumerate_partitions
from .qmoments import MomentSequence, QuantumModel, moment, moment_sequence
from .groups import group_moment_sequence, parse_preset
from .analysis import (
    check_convolution,
    check_hankel,
    estimate_norm,
    minorant_certificate,
    to_A_sequence,
)

__version__ = "0.1.0"
