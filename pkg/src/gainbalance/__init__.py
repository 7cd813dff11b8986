"""Balance tests for gain graphs.

A gain graph is a multigraph whose edges carry group elements (reversing an
edge inverts its label).  This package decides balance, evaluates the Binary
Cycle Test and the Circle Test against arbitrary cycle-space bases, classifies
finite graphs as good or bad for those tests per class of gain groups, and
produces machine-checkable witnesses for every bad verdict.
"""

__version__ = "0.1.0"
