# Copyright (C) 2026 The bidsum developers
#
# This module is part of bidsum and is released under
# the New BSD License: http://www.opensource.org/licenses/bsd-license.php
"""Training, prediction and evaluation of saliency scorers, plus checkpoints"""
import logging
import math

import numpy as np

from bidsum.const import (
    CHECKPOINT_FORMAT_VERSION,
    SINKHORN_ITERATIONS,
    TEMPERATURE,
    TOP_RATIO
)
from bidsum.exc import (
    InvalidInput,
    ParseError,
    TrainingFailure
)
from bidsum.fun import normalize_scores
from bidsum.metrics import (
    kendall_tau,
    ndcg_vm,
    spearman_rho
)
from bidsum.rank import (
    mse_loss,
    neural_ndcg_loss
)
from bidsum.report import (
    HistoryRecord,
    read_json,
    write_json
)
from bidsum.scorer.base import EncoderConfig
from bidsum.scorer.encoder import EncoderScorer
from bidsum.scorer.linear import LinearScorer
from bidsum.typ import (
    loss_kinds,
    optimizer_kinds,
    str_adam_optimizer,
    str_encoder_scorer,
    str_mse_loss,
    str_sgd_optimizer
)

log = logging.getLogger(__name__)

__all__ = ('make_scorer', 'SGD', 'Adam', 'make_optimizer', 'sample_loss', 'train', 'predict',
           'evaluate_scorer', 'smoothness_report', 'SmoothnessReport', 'save_checkpoint', 'load_checkpoint')

_scorers = dict((cls.kind, cls) for cls in (LinearScorer, EncoderScorer))


def make_scorer(kind):
    """:return: scorer instance of the given kind
    :raise InvalidInput: if the kind is unknown"""
    try:
        return _scorers[kind]()
    except KeyError:
        raise InvalidInput("unknown scorer kind %r, choose from %s" % (kind, ', '.join(sorted(_scorers)))) from None


#{ Optimizers

class SGD(object):

    """Plain gradient descent"""
    __slots__ = ('learning_rate', )

    def __init__(self, learning_rate):
        self.learning_rate = learning_rate

    def step(self, params):
        for name, grad in params.grads.items():
            params.tensors[name] -= self.learning_rate * grad


class Adam(object):

    """Gradient descent with bias corrected first and second moment estimates"""
    __slots__ = ('learning_rate', 'beta1', 'beta2', 'eps', '_m', '_v', '_t')

    def __init__(self, learning_rate, beta1=0.9, beta2=0.999, eps=1e-8):
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self._m = dict()
        self._v = dict()
        self._t = 0

    def step(self, params):
        self._t += 1
        c1 = 1.0 - self.beta1 ** self._t
        c2 = 1.0 - self.beta2 ** self._t
        for name, grad in params.grads.items():
            m = self._m.setdefault(name, np.zeros_like(grad))
            v = self._v.setdefault(name, np.zeros_like(grad))
            m *= self.beta1
            m += (1.0 - self.beta1) * grad
            v *= self.beta2
            v += (1.0 - self.beta2) * grad * grad
            params.tensors[name] -= self.learning_rate * (m / c1) / (np.sqrt(v / c2) + self.eps)
        # END for each tensor


def make_optimizer(kind, learning_rate):
    if kind == str_sgd_optimizer:
        return SGD(learning_rate)
    if kind == str_adam_optimizer:
        return Adam(learning_rate)
    raise InvalidInput("unknown optimizer %r, choose from %s" % (kind, ', '.join(optimizer_kinds)))

#} END optimizers


#{ Training

def sample_loss(loss_kind, pred, target, k=None, temperature=TEMPERATURE, sinkhorn_iterations=SINKHORN_ITERATIONS):
    """:return: LossValue of one video. The ranking loss sees normalized targets,
        like the NDCG metrics do"""
    if loss_kind == str_mse_loss:
        return mse_loss(pred, target)
    return neural_ndcg_loss(pred, normalize_scores(target), k=None if k is None else min(k, len(target)),
                            temperature=temperature, sinkhorn_iterations=sinkhorn_iterations)


def train(dataset, loss_kind, epochs, learning_rate, seed=0, scorer=str_encoder_scorer, config=None,
          validation=None, optimizer=str_adam_optimizer, batch_size=None, k=None, temperature=TEMPERATURE,
          sinkhorn_iterations=SINKHORN_ITERATIONS, top_ratio=TOP_RATIO, text_loss=None):
    """Fit a scorer to the given samples by gradient descent.

    Per-video losses and gradients are averaged over each batch, summed in
    sample order. Without batch_size the whole dataset forms one batch,
    otherwise samples are shuffled every epoch using a generator seeded with seed.

    :param dataset: non-empty list of SyntheticSample
    :param loss_kind: one of ``bidsum.typ.loss_kinds``
    :param scorer: scorer kind or Scorer instance
    :param config: EncoderConfig, defaults to one matching the feature dimension, seeded with seed
    :param validation: optional list of SyntheticSample evaluated after each epoch
    :param k: ranks scored by the ranking loss, all if None
    :param text_loss: optional callable(params, sample) returning tuple(value, grads)
        of an additional objective. It is called for every sample, gradients
        are added to those of the saliency objective
    :return: tuple(ScorerParams, history) with one HistoryRecord per epoch
    :raise InvalidInput: on invalid arguments
    :raise TrainingFailure: if the loss or the weights become non-finite"""
    if not dataset:
        raise InvalidInput("cannot train on an empty dataset")
    if epochs < 1:
        raise InvalidInput("epochs must be at least 1, got %r" % (epochs, ))
    if loss_kind not in loss_kinds:
        raise InvalidInput("unknown loss %r, choose from %s" % (loss_kind, ', '.join(loss_kinds)))
    if learning_rate < 0:
        raise InvalidInput("learning rate must not be negative, got %r" % (learning_rate, ))
    if batch_size is not None and batch_size < 1:
        raise InvalidInput("batch size must be positive, got %r" % (batch_size, ))

    if isinstance(scorer, str):
        scorer = make_scorer(scorer)
    if config is None:
        dim = dataset[0].features.shape[1]
        config = EncoderConfig(model_dim=dim, num_heads=2 if dim % 2 == 0 else 1, seed=seed)
    params = scorer.init_params(config)
    opt = make_optimizer(optimizer, learning_rate)
    rng = np.random.default_rng(seed)

    history = list()
    for epoch in range(1, epochs + 1):
        order = np.arange(len(dataset))
        if batch_size is None:
            batches = [order]
        else:
            order = rng.permutation(order)
            batches = [order[i:i + batch_size] for i in range(0, len(order), batch_size)]
        # END create batches

        losses = list()
        for batch in batches:
            params.zero_grad()
            scale = 1.0 / len(batch)
            for index in batch:
                sample = dataset[index]
                pred, cache = scorer.forward(params, sample.features)
                lv = sample_loss(loss_kind, pred, sample.target_saliency, k, temperature, sinkhorn_iterations)
                value = lv.value
                params.accumulate(scorer.backward(params, cache, lv.gradient), scale)
                if text_loss is not None:
                    tvalue, tgrads = text_loss(params, sample)
                    value += tvalue
                    params.accumulate(tgrads, scale)
                # END handle text objective
                if not math.isfinite(value):
                    raise TrainingFailure(epoch, "non-finite loss on video %r" % (sample.video_id, ))
                losses.append(value)
            # END for each sample
            opt.step(params)
        # END for each batch
        if not params.is_finite():
            raise TrainingFailure(epoch, "weights became non-finite")

        if validation:
            scores = evaluate_scorer(params, validation, top_ratio, scorer=scorer)
            val15, valall = scores['ndcg@15'], scores['ndcg@all']
        else:
            val15 = valall = float('nan')
        # END handle validation
        record = HistoryRecord(epoch, math.fsum(losses) / len(losses), val15, valall)
        history.append(record)
        log.debug("epoch %i: loss %.6f, validation ndcg@15 %.4f, ndcg@all %.4f", *record)
    # END for each epoch

    log.info("trained %s scorer with %s loss for %i epochs", scorer.kind, loss_kind, epochs)
    return params, history

#} END training


#{ Evaluation

def predict(params, features, scorer=None):
    """:return: predicted per-clip saliency of the given (n, model_dim) features"""
    scorer = scorer or make_scorer(params.kind)
    return scorer.predict(params, features)


def evaluate_scorer(params, samples, top_ratio=TOP_RATIO, scorer=None):
    """:return: dict with mean 'ndcg@15', 'ndcg@all', 'kendall_tau' and 'spearman_rho'
        over the samples. NaN correlations are skipped, all values are NaN without samples"""
    scorer = scorer or make_scorer(params.kind)
    columns = dict((name, list()) for name in ('ndcg@15', 'ndcg@all', 'kendall_tau', 'spearman_rho'))
    for sample in samples:
        pred = scorer.predict(params, sample.features)
        target = sample.target_saliency
        ndcg = ndcg_vm(pred, target, top_ratio)
        columns['ndcg@15'].append(ndcg.at_15)
        columns['ndcg@all'].append(ndcg.at_all)
        if len(target) >= 2:
            columns['kendall_tau'].append(kendall_tau(pred, target))
            columns['spearman_rho'].append(spearman_rho(pred, target))
        # END handle correlations
    # END for each sample

    means = dict()
    for name, values in columns.items():
        values = [v for v in values if not math.isnan(v)]
        means[name] = math.fsum(values) / len(values) if values else float('nan')
    return means


class SmoothnessReport(tuple):

    """Per-video variances of predictions and targets"""
    __slots__ = tuple()

    def __new__(cls, pred_variances, target_variances):
        return tuple.__new__(cls, (np.asarray(pred_variances, dtype=np.float64),
                                   np.asarray(target_variances, dtype=np.float64)))

    @property
    def pred_variances(self):
        return self[0]

    @property
    def target_variances(self):
        return self[1]

    @property
    def smoother_fraction(self):
        """:return: fraction of videos whose predictions vary strictly less than their targets"""
        if not len(self[0]):
            return float('nan')
        return float(np.mean(self[0] < self[1]))


def smoothness_report(params, samples, scorer=None):
    """:return: SmoothnessReport comparing prediction and target variance per video"""
    scorer = scorer or make_scorer(params.kind)
    pred_var = [np.var(scorer.predict(params, s.features)) for s in samples]
    target_var = [np.var(s.target_saliency) for s in samples]
    return SmoothnessReport(pred_var, target_var)

#} END evaluation


#{ Checkpoints

def save_checkpoint(filepath, params):
    """Write the weights along with scorer kind and config as JSON document"""
    doc = {
        'format_version': CHECKPOINT_FORMAT_VERSION,
        'kind': params.kind,
        'config': dict(params.config.as_dict()),
        'tensors': dict((name, {'shape': list(t.shape), 'data': t.ravel().tolist()})
                        for name, t in params.tensors.items()),
    }
    return write_json(filepath, doc)


def load_checkpoint(filepath):
    """:return: ScorerParams read from a checkpoint written by save_checkpoint
    :raise ParseError: if the document is not a checkpoint of a supported version"""
    doc = read_json(filepath)
    if not isinstance(doc, dict) or doc.get('format_version') != CHECKPOINT_FORMAT_VERSION:
        raise ParseError("not a version %i checkpoint" % CHECKPOINT_FORMAT_VERSION, filepath)
    try:
        params = make_scorer(doc['kind']).init_params(EncoderConfig.from_dict(doc['config']))
        tensors = doc['tensors']
        if set(tensors) != set(params.tensors):
            raise ParseError("checkpoint tensors do not match the %s scorer" % doc['kind'], filepath)
        for name in params.tensors:
            shape = tuple(tensors[name]['shape'])
            if shape != params.tensors[name].shape:
                raise ParseError("tensor %s has shape %s, expected %s"
                                 % (name, shape, params.tensors[name].shape), filepath)
            params.tensors[name] = np.asarray(tensors[name]['data'], dtype=np.float64).reshape(shape)
        # END for each tensor
    except (KeyError, TypeError, InvalidInput) as e:
        raise ParseError("malformed checkpoint: %s" % e, filepath) from e
    return params

#} END checkpoints
