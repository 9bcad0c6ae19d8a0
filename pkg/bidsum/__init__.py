# Copyright (C) 2026 The bidsum developers
#
# This module is part of bidsum and is released under
# the New BSD License: http://www.opensource.org/licenses/bsd-license.php
"""Bimodal video summarization: timelines, summaries, metrics and toy scorers"""

__homepage__ = "https://github.com/bidsum/bidsum"
version_info = (0, 3, 0)
__version__ = '.'.join(str(i) for i in version_info)


# default imports
from bidsum.base import *
from bidsum.summary import *
from bidsum.metrics import *
