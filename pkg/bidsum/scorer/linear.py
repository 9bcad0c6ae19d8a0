# Copyright (C) 2026 The bidsum developers
#
# This module is part of bidsum and is released under
# the New BSD License: http://www.opensource.org/licenses/bsd-license.php
"""Contains the LinearScorer implementation"""
from collections import OrderedDict

import numpy as np

from bidsum.scorer.base import (
    Scorer,
    ScorerParams
)
from bidsum.typ import str_linear_scorer

__all__ = ('LinearScorer', )


class LinearScorer(Scorer):

    """Scores every clip by an affine function of its features. Predictions are
    not squashed, and weights start at zero"""
    kind = str_linear_scorer

    def init_params(self, config):
        return ScorerParams(self.kind, config, OrderedDict((
            ('weight', np.zeros(config.model_dim)),
            ('bias', np.zeros(1)),
        )))

    def forward(self, params, features):
        features = self._check_features(params, features)
        return features.dot(params['weight']) + params['bias'][0], features

    def backward(self, params, cache, dpred):
        features = cache
        return OrderedDict((
            ('weight', features.T.dot(dpred)),
            ('bias', np.array([np.sum(dpred)])),
        ))
