#!/usr/bin/env python3
"""
Composite Workbench assembled from smaller mixins.

Each mixin owns one group of CLI commands; they share the document loader,
the log ring and the lock that live on BaseState.
"""

from .base_state import BaseState
from .logging_mixin import LoggingMixin
from .check_mixin import CheckMixin
from .convolve_mixin import ConvolveMixin
from .ainfty_mixin import AinftyMixin
from .transfer_mixin import TransferMixin
from .selftest_mixin import SelftestMixin


class Workbench(
    BaseState,
    LoggingMixin,
    CheckMixin,
    ConvolveMixin,
    AinftyMixin,
    TransferMixin,
    SelftestMixin,
):
    """Loads documents, runs one operation and returns its report."""


workbench = Workbench()
