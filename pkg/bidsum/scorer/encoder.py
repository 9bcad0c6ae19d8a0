# Copyright (C) 2026 The bidsum developers
#
# This module is part of bidsum and is released under
# the New BSD License: http://www.opensource.org/licenses/bsd-license.php
"""Contains the gated-attention encoder and its saliency regressor.

Every layer refines the clip features ``V`` as follows::

    Vbar = V + MultiHeadAttention(V)
    s    = sigmoid(FeedForward(Vbar))
    Vout = s * Vbar

The regressor maps the gates ``s`` of the last layer, or alternatively its
output ``Vout``, through two affine layers with a tanh in between and a final
sigmoid to one score per clip. No layer changes the feature dimension.

Gradients are computed by a hand written backward pass mirroring the forward
pass step by step."""
from collections import OrderedDict

import numpy as np

from bidsum.exc import InvalidInput
from bidsum.scorer.base import (
    Scorer,
    ScorerParams
)
from bidsum.typ import (
    str_encoder_scorer,
    str_regress_gates
)

__all__ = ('EncoderScorer', 'encoder_forward', 'regress_scores', 'positional_encoding', 'layer_names')


#{ Utilities

def _sigmoid(x):
    # split by sign to avoid overflow in exp
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    e = np.exp(x[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def _softmax_rows(x):
    e = np.exp(x - x.max(axis=1, keepdims=True))
    return e / e.sum(axis=1, keepdims=True)


def layer_names(index):
    """:return: tuple of tensor names of the layer at the given index"""
    prefix = "layers.%i." % index
    return tuple(prefix + n for n in ('wq', 'wk', 'wv', 'wo', 'w1', 'b1', 'w2', 'b2'))


def positional_encoding(num_clips, model_dim):
    """:return: (num_clips, model_dim) array of sinusoidal position encodings"""
    pos = np.arange(num_clips, dtype=np.float64)[:, None]
    i = np.arange(model_dim)[None, :]
    angle = pos / np.power(10000.0, (2 * (i // 2)) / float(model_dim))
    return np.where(i % 2 == 0, np.sin(angle), np.cos(angle))

#} END utilities


#{ Forward

def _attention(v, wq, wk, wv, wo, num_heads):
    n, d = v.shape
    dh = d // num_heads
    q = v.dot(wq)
    k = v.dot(wk)
    vv = v.dot(wv)
    scale = 1.0 / np.sqrt(dh)
    heads = list()
    out = np.empty_like(v)
    for h in range(num_heads):
        cols = slice(h * dh, (h + 1) * dh)
        a = _softmax_rows(q[:, cols].dot(k[:, cols].T) * scale)
        out[:, cols] = a.dot(vv[:, cols])
        heads.append(a)
    # END for each head
    return out.dot(wo), (q, k, vv, heads, out)


def _layer_forward(v, params, index):
    wq, wk, wv, wo, w1, b1, w2, b2 = (params[n] for n in layer_names(index))
    mixed, attn_cache = _attention(v, wq, wk, wv, wo, params.config.num_heads)
    vbar = v + mixed
    h1 = vbar.dot(w1) + b1
    r = np.maximum(h1, 0.0)
    s = _sigmoid(r.dot(w2) + b2)
    return s * vbar, (v, attn_cache, vbar, h1, r, s)


def _encode(features, params):
    if features.ndim != 2 or features.shape[1] != params.config.model_dim:
        raise InvalidInput("expected features of shape (n, %i), got %s"
                           % (params.config.model_dim, features.shape))
    v = features
    if params.config.positional:
        v = v + positional_encoding(len(v), v.shape[1])
    caches = list()
    for index in range(params.config.num_layers):
        v, cache = _layer_forward(v, params, index)
        caches.append(cache)
    # END for each layer
    return v, caches


def encoder_forward(features, params):
    """Run the encoder layers over the given clip features

    :param features: (n, model_dim) array
    :param params: ScorerParams of an EncoderScorer
    :return: tuple(hidden_states, gates) of the last layer, both (n, model_dim)
    :raise InvalidInput: if features and parameters disagree in shape"""
    hidden, caches = _encode(np.asarray(features, dtype=np.float64), params)
    return hidden, caches[-1][-1]


def _regress(y, params):
    t = np.tanh(y.dot(params['regressor.w1']) + params['regressor.b1'])
    return _sigmoid(t.dot(params['regressor.w2']) + params['regressor.b2'][0]), t


def regress_scores(hidden_or_gate, params):
    """:return: one score in (0, 1) per row of the given (n, model_dim) array
    :raise InvalidInput: on a shape mismatch"""
    y = np.asarray(hidden_or_gate, dtype=np.float64)
    if y.ndim != 2 or y.shape[1] != params['regressor.w1'].shape[0]:
        raise InvalidInput("expected input of shape (n, %i), got %s"
                           % (params['regressor.w1'].shape[0], y.shape))
    return _regress(y, params)[0]

#} END forward


#{ Backward

def _attention_backward(dout, wq, wk, wv, wo, num_heads, v, cache):
    q, k, vv, heads, out = cache
    dh = v.shape[1] // num_heads
    scale = 1.0 / np.sqrt(dh)
    dwo = out.T.dot(dout)
    dheads = dout.dot(wo.T)
    dq = np.empty_like(q)
    dk = np.empty_like(k)
    dvv = np.empty_like(vv)
    for h, a in enumerate(heads):
        cols = slice(h * dh, (h + 1) * dh)
        do = dheads[:, cols]
        da = do.dot(vv[:, cols].T)
        dvv[:, cols] = a.T.dot(do)
        dscore = a * (da - np.sum(da * a, axis=1, keepdims=True)) * scale
        dq[:, cols] = dscore.dot(k[:, cols])
        dk[:, cols] = dscore.T.dot(q[:, cols])
    # END for each head
    dv = dq.dot(wq.T) + dk.dot(wk.T) + dvv.dot(wv.T)
    return dv, v.T.dot(dq), v.T.dot(dk), v.T.dot(dvv), dwo


def _layer_backward(dvout, dgate, params, index, cache, grads):
    names = layer_names(index)
    wq, wk, wv, wo, w1, b1, w2, b2 = (params[n] for n in names)
    v, attn_cache, vbar, h1, r, s = cache

    ds = dvout * vbar
    if dgate is not None:
        ds = ds + dgate
    dvbar = dvout * s
    df = ds * s * (1.0 - s)
    grads[names[6]] = r.T.dot(df)
    grads[names[7]] = df.sum(axis=0)
    dh1 = df.dot(w2.T) * (h1 > 0)
    grads[names[4]] = vbar.T.dot(dh1)
    grads[names[5]] = dh1.sum(axis=0)
    dvbar = dvbar + dh1.dot(w1.T)

    dv, dwq, dwk, dwv, dwo = _attention_backward(dvbar, wq, wk, wv, wo, params.config.num_heads, v, attn_cache)
    grads[names[0]] = dwq
    grads[names[1]] = dwk
    grads[names[2]] = dwv
    grads[names[3]] = dwo
    return dvbar + dv

#} END backward


class EncoderScorer(Scorer):

    """Gated-attention encoder followed by the saliency regressor"""
    kind = str_encoder_scorer

    def init_params(self, config):
        rng = np.random.default_rng(config.seed)
        d, f, r = config.model_dim, config.ffn_dim, config.regressor_dim

        def weight(fan_in, fan_out):
            return rng.normal(0.0, 1.0 / np.sqrt(fan_in), size=(fan_in, fan_out))

        tensors = OrderedDict()
        for index in range(config.num_layers):
            names = layer_names(index)
            for name in names[:4]:
                tensors[name] = weight(d, d)
            tensors[names[4]] = weight(d, f)
            tensors[names[5]] = np.zeros(f)
            tensors[names[6]] = weight(f, d)
            tensors[names[7]] = np.zeros(d)
        # END for each layer
        tensors['regressor.w1'] = weight(d, r)
        tensors['regressor.b1'] = np.zeros(r)
        tensors['regressor.w2'] = weight(r, 1).ravel()
        tensors['regressor.b2'] = np.zeros(1)
        return ScorerParams(self.kind, config, tensors)

    def forward(self, params, features):
        features = self._check_features(params, features)
        hidden, caches = _encode(features, params)
        if params.config.regressor_input == str_regress_gates:
            y = caches[-1][-1]
        else:
            y = hidden
        pred, t = _regress(y, params)
        return pred, (caches, y, t, pred)

    def backward(self, params, cache, dpred):
        caches, y, t, pred = cache
        grads = OrderedDict()

        dz2 = dpred * pred * (1.0 - pred)
        grads['regressor.w2'] = t.T.dot(dz2)
        grads['regressor.b2'] = np.array([dz2.sum()])
        dz1 = np.outer(dz2, params['regressor.w2']) * (1.0 - t * t)
        grads['regressor.w1'] = y.T.dot(dz1)
        grads['regressor.b1'] = dz1.sum(axis=0)
        dy = dz1.dot(params['regressor.w1'].T)

        if params.config.regressor_input == str_regress_gates:
            dvout, dgate = np.zeros_like(dy), dy
        else:
            dvout, dgate = dy, None
        # END route regressor gradient
        for index in range(len(caches) - 1, -1, -1):
            dvout = _layer_backward(dvout, dgate, params, index, caches[index], grads)
            dgate = None
        # END for each layer

        # report in parameter order
        return OrderedDict((name, grads[name]) for name in params)
