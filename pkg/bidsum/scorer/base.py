# Copyright (C) 2026 The bidsum developers
#
# This module is part of bidsum and is released under
# the New BSD License: http://www.opensource.org/licenses/bsd-license.php
"""Contains the types shared by all saliency scorers and the scorer interface"""
from collections import OrderedDict

import numpy as np

from bidsum.exc import InvalidInput
from bidsum.typ import (
    str_regress_gates,
    str_regress_hidden
)

__all__ = ('EncoderConfig', 'ScorerParams', 'SyntheticSample', 'Scorer')


#{ Types

class EncoderConfig(tuple):

    """Shape and initialization of a scorer.

    The linear scorer only uses model_dim and seed, all other fields configure
    the gated-attention encoder and its regressor"""
    __slots__ = tuple()

    # field names in tuple order, as used for serialization
    fields = ('num_layers', 'model_dim', 'num_heads', 'ffn_dim', 'seed', 'regressor_dim',
              'regressor_input', 'positional')

    def __new__(cls, num_layers=2, model_dim=16, num_heads=2, ffn_dim=32, seed=0, regressor_dim=16,
                regressor_input=str_regress_gates, positional=False):
        for name, value in (('num_layers', num_layers), ('model_dim', model_dim), ('num_heads', num_heads),
                            ('ffn_dim', ffn_dim), ('regressor_dim', regressor_dim)):
            if int(value) != value or value < 1:
                raise InvalidInput("%s must be a positive integer, got %r" % (name, value))
        # END for each dimension
        if model_dim % num_heads:
            raise InvalidInput("model_dim %i is not divisible by num_heads %i" % (model_dim, num_heads))
        if regressor_input not in (str_regress_gates, str_regress_hidden):
            raise InvalidInput("unknown regressor input %r" % (regressor_input, ))
        return tuple.__new__(cls, (int(num_layers), int(model_dim), int(num_heads), int(ffn_dim), int(seed),
                                   int(regressor_dim), regressor_input, bool(positional)))

    @classmethod
    def from_dict(cls, values):
        """:return: config from a dict as produced by as_dict. Unknown keys are an error"""
        unknown = set(values) - set(cls.fields)
        if unknown:
            raise InvalidInput("unknown config fields: %s" % ', '.join(sorted(unknown)))
        return cls(**values)

    def as_dict(self):
        return OrderedDict(zip(self.fields, self))

    def replace(self, **kwargs):
        """:return: copy of this config with the given fields changed"""
        values = self.as_dict()
        values.update(kwargs)
        return type(self)(**values)

    #{ Interface
    @property
    def num_layers(self):
        return self[0]

    @property
    def model_dim(self):
        return self[1]

    @property
    def num_heads(self):
        return self[2]

    @property
    def ffn_dim(self):
        return self[3]

    @property
    def seed(self):
        return self[4]

    @property
    def regressor_dim(self):
        return self[5]

    @property
    def regressor_input(self):
        return self[6]

    @property
    def positional(self):
        return self[7]

    @property
    def head_dim(self):
        return self[1] // self[2]
    #} END interface


class ScorerParams(object):

    """Named weight tensors of a scorer along with gradient buffers of identical shape.

    Tensors are kept in insertion order, which is the order used for
    serialization and gradient checks."""
    __slots__ = ('kind', 'config', 'tensors', 'grads')

    def __init__(self, kind, config, tensors):
        self.kind = kind
        self.config = config
        self.tensors = OrderedDict((name, np.asarray(t, dtype=np.float64)) for name, t in tensors.items())
        self.grads = OrderedDict((name, np.zeros_like(t)) for name, t in self.tensors.items())

    def __getitem__(self, name):
        return self.tensors[name]

    def __contains__(self, name):
        return name in self.tensors

    def __iter__(self):
        return iter(self.tensors)

    def __len__(self):
        return len(self.tensors)

    def zero_grad(self):
        for grad in self.grads.values():
            grad.fill(0.0)

    def accumulate(self, grads, scale=1.0):
        """Add the given mapping of gradients into our buffers"""
        for name, grad in grads.items():
            if grad.shape != self.grads[name].shape:
                raise InvalidInput("gradient of %s has shape %s, expected %s"
                                   % (name, grad.shape, self.grads[name].shape))
            self.grads[name] += scale * grad
        # END for each gradient

    def copy(self):
        """:return: deep copy of the tensors with fresh gradient buffers"""
        return type(self)(self.kind, self.config, OrderedDict((n, t.copy()) for n, t in self.tensors.items()))

    def is_finite(self):
        return all(np.all(np.isfinite(t)) for t in self.tensors.values())

    def num_values(self):
        """:return: total amount of scalar weights"""
        return sum(t.size for t in self.tensors.values())


class SyntheticSample(tuple):

    """Per-clip feature vectors of one video and the saliency to predict"""
    __slots__ = tuple()

    def __new__(cls, features, target_saliency, video_id=''):
        features = np.asarray(features, dtype=np.float64)
        target = np.asarray(target_saliency, dtype=np.float64)
        if features.ndim != 2 or target.ndim != 1:
            raise InvalidInput("features must be 2d and targets 1d, got %s and %s"
                               % (features.shape, target.shape))
        if len(features) != len(target):
            raise InvalidInput("got %i feature vectors for %i targets" % (len(features), len(target)))
        return tuple.__new__(cls, (features, target, video_id))

    @property
    def features(self):
        return self[0]

    @property
    def target_saliency(self):
        return self[1]

    @property
    def video_id(self):
        return self[2]

    @property
    def num_clips(self):
        return len(self[1])

#} END types


class Scorer(object):

    """Defines the interface of a differentiable saliency scorer. Scorers are
    stateless, weights are kept in ScorerParams"""

    #{ Configuration
    # kind string as stored in checkpoints
    kind = None
    #} END configuration

    def init_params(self, config):
        """:return: ScorerParams initialized deterministically from config.seed"""
        raise NotImplementedError("To be implemented in subclass")

    def forward(self, params, features):
        """:return: tuple(predictions, cache), the cache is opaque and only to be
            passed to backward
        :raise InvalidInput: if the features do not match the parameters"""
        raise NotImplementedError("To be implemented in subclass")

    def backward(self, params, cache, dpred):
        """:return: dict of gradients by tensor name, given the gradient of the
            loss with respect to the predictions"""
        raise NotImplementedError("To be implemented in subclass")

    def predict(self, params, features):
        """:return: per-clip predictions for the given features"""
        return self.forward(params, features)[0]

    def _check_features(self, params, features):
        features = np.asarray(features, dtype=np.float64)
        if features.ndim != 2 or features.shape[1] != params.config.model_dim:
            raise InvalidInput("expected features of shape (n, %i), got %s"
                               % (params.config.model_dim, features.shape))
        if not len(features):
            raise InvalidInput("cannot score a video without clips")
        return features
