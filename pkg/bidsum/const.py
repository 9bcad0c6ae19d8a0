# Copyright (C) 2026 The bidsum developers
#
# This module is part of bidsum and is released under
# the New BSD License: http://www.opensource.org/licenses/bsd-license.php
"""Library wide defaults, all durations are given in seconds"""
CLIP_DURATION_S = 2.0
FPS = 8
BUDGET_RATIO = 0.15
TOP_RATIO = 0.15

MIN_SEGMENT_S = 2.0
MIN_COVERAGE = 0.05

TEMPERATURE = 1.0
SINKHORN_ITERATIONS = 30

SPLIT_FRACTIONS = (0.72, 0.08, 0.20)

# tolerance used when comparing durations in seconds
EPS_S = 1e-9

CHECKPOINT_FORMAT_VERSION = 1
