# Copyright (C) 2026 The bidsum developers
#
# This module is part of bidsum and is released under
# the New BSD License: http://www.opensource.org/licenses/bsd-license.php
"""Test training loop, optimizers, evaluation and checkpoints"""
import json
import math
import os
from collections import OrderedDict

import numpy as np

from bidsum.exc import (
    InvalidInput,
    ParseError,
    TrainingFailure
)
from bidsum.scorer.base import (
    EncoderConfig,
    ScorerParams,
    SyntheticSample
)
from bidsum.scorer.bench import make_distorted_benchmark
from bidsum.scorer.train import (
    Adam,
    evaluate_scorer,
    load_checkpoint,
    make_optimizer,
    make_scorer,
    predict,
    sample_loss,
    save_checkpoint,
    SGD,
    smoothness_report,
    train
)
from bidsum.test.lib import (
    TestBase,
    with_rw_directory,
    write_text
)

LINEAR3 = EncoderConfig(model_dim=3, num_heads=1)


def linear_dataset(rng, num_videos=5, num_clips=10, weight=(0.5, -1.0, 2.0), bias=0.3):
    samples = list()
    for index in range(num_videos):
        features = rng.normal(size=(num_clips, len(weight)))
        samples.append(SyntheticSample(features, features.dot(weight) + bias, "v%i" % index))
    # END for each video
    return samples


class TestOptimizers(TestBase):

    def make_params(self):
        return ScorerParams('linear', LINEAR3, OrderedDict((('weight', np.array([1.0, 2.0, 3.0])), )))

    def test_sgd(self):
        params = self.make_params()
        params.grads['weight'][:] = [1.0, -1.0, 0.0]
        SGD(0.5).step(params)
        self.assert_close(params['weight'], [0.5, 2.5, 3.0])

    def test_adam_first_step(self):
        params = self.make_params()
        params.grads['weight'][:] = [4.0, -0.001, 0.0]
        Adam(0.1).step(params)
        # bias correction turns the first step into a signed step of the learning rate
        self.assert_close(params['weight'], [0.9, 2.1, 3.0], 1e-5)

    def test_make_optimizer(self):
        assert isinstance(make_optimizer('sgd', 0.1), SGD)
        assert isinstance(make_optimizer('adam', 0.1), Adam)
        self.assertRaises(InvalidInput, make_optimizer, 'rmsprop', 0.1)
        self.assertRaises(InvalidInput, make_scorer, 'forest')


class TestTraining(TestBase):

    def test_zero_learning_rate(self):
        train_set, validation = make_distorted_benchmark(6, 8, seed=2, model_dim=4)
        config = EncoderConfig(num_layers=1, model_dim=4, num_heads=2, seed=7)
        initial = make_scorer('encoder').init_params(config)
        params, history = train(train_set, 'neural_ndcg', 3, 0.0, config=config, validation=validation)
        assert all(np.array_equal(params[n], initial[n]) for n in params)
        assert len(history) == 3 and [r.epoch for r in history] == [1, 2, 3]
        assert history[0].train_loss == history[1].train_loss == history[2].train_loss
        assert history[0].val_ndcg_all == history[2].val_ndcg_all

    def test_convex_convergence(self):
        dataset = linear_dataset(self.rng)
        params, history = train(dataset, 'mse', 500, 0.1, scorer='linear', config=LINEAR3, optimizer='sgd')
        assert history[-1].train_loss < 1e-3
        assert history[-1].train_loss < history[0].train_loss
        self.assert_close(params['weight'], [0.5, -1.0, 2.0], 1e-2)
        assert all(math.isnan(r.val_ndcg_15) for r in history)

    def test_determinism(self):
        dataset = linear_dataset(self.rng)
        for batch_size in (None, 2):
            runs = [train(dataset, 'neural_ndcg', 5, 0.05, seed=11, scorer='linear', config=LINEAR3,
                          batch_size=batch_size) for _ in range(2)]
            (pa, ha), (pb, hb) = runs
            assert all(np.array_equal(pa[n], pb[n]) for n in pa)
            assert [r.train_loss for r in ha] == [r.train_loss for r in hb]
        # END for each batching

    def test_default_config(self):
        dataset = linear_dataset(self.rng, num_videos=2, num_clips=4)
        params, _ = train(dataset, 'mse', 1, 0.01)
        assert params.kind == 'encoder'
        assert params.config.model_dim == 3 and params.config.num_heads == 1

    def test_text_loss(self):
        dataset = linear_dataset(self.rng, num_videos=2)
        calls = list()

        def text_loss(params, sample):
            calls.append(sample.video_id)
            return 1.5, OrderedDict((('bias', np.array([0.0])), ))

        _, plain = train(dataset, 'mse', 2, 0.0, scorer='linear', config=LINEAR3)
        _, history = train(dataset, 'mse', 2, 0.0, scorer='linear', config=LINEAR3, text_loss=text_loss)
        assert calls == ['v0', 'v1'] * 2
        self.assert_close(history[0].train_loss, plain[0].train_loss + 1.5)

    def test_failure(self):
        dataset = linear_dataset(self.rng, num_videos=2)
        features = dataset[1].features.copy()
        features[3, 0] = float('nan')
        dataset[1] = SyntheticSample(features, dataset[1].target_saliency, 'broken')
        try:
            train(dataset, 'mse', 3, 0.1, scorer='linear', config=LINEAR3)
        except TrainingFailure as e:
            assert e.epoch == 1
            assert 'broken' in str(e)
        else:
            self.fail("expected the training to fail")
        # END handle failure

    def test_invalid_arguments(self):
        dataset = linear_dataset(self.rng, num_videos=1)
        self.assertRaises(InvalidInput, train, [], 'mse', 1, 0.1)
        self.assertRaises(InvalidInput, train, dataset, 'mse', 0, 0.1)
        self.assertRaises(InvalidInput, train, dataset, 'hinge', 1, 0.1)
        self.assertRaises(InvalidInput, train, dataset, 'mse', 1, -0.1)
        self.assertRaises(InvalidInput, train, dataset, 'mse', 1, 0.1, batch_size=0)
        self.assertRaises(InvalidInput, train, dataset, 'mse', 1, 0.1, scorer='forest')
        self.assertRaises(InvalidInput, train, dataset, 'mse', 1, 0.1, optimizer='rmsprop')

    def test_sample_loss(self):
        pred = np.array([0.1, 0.9, 0.5])
        target = np.array([1.0, 3.0, 2.0])
        self.assert_close(sample_loss('mse', pred, target).value, np.mean((pred - target) ** 2))
        # ranking losses see normalized targets, perfectly ordered predictions score close to the optimum
        assert sample_loss('neural_ndcg', pred * 100, target).value < 1e-3
        assert sample_loss('neural_ndcg', pred, target, k=10).gradient.shape == (3, )


class TestEvaluation(TestBase):

    def perfect_params(self):
        params = make_scorer('linear').init_params(LINEAR3)
        params['weight'][:] = [1.0, 0.0, 0.0]
        return params

    def test_evaluate_scorer(self):
        samples = list()
        for index in range(3):
            target = self.rng.permutation(6).astype(np.float64)
            features = np.zeros((6, 3))
            features[:, 0] = target
            samples.append(SyntheticSample(features, target, "v%i" % index))
        # END for each sample
        params = self.perfect_params()
        scores = evaluate_scorer(params, samples)
        for name in ('ndcg@15', 'ndcg@all', 'kendall_tau', 'spearman_rho'):
            self.assert_close(scores[name], 1.0, 1e-12)
        # END for each score

        params['weight'][:] = [-1.0, 0.0, 0.0]
        reversed_scores = evaluate_scorer(params, samples)
        self.assert_close(reversed_scores['kendall_tau'], -1.0, 1e-12)
        assert reversed_scores['ndcg@15'] < 1

        single = [SyntheticSample(np.ones((1, 3)), [2.0])]
        scores = evaluate_scorer(params, single)
        assert scores['ndcg@all'] == 1.0 and math.isnan(scores['kendall_tau'])
        assert all(math.isnan(v) for v in evaluate_scorer(params, []).values())
        self.assert_close(predict(self.perfect_params(), samples[0].features), samples[0].target_saliency)

    def test_smoothness(self):
        target = np.array([0.0, 1.0, 0.0, 1.0])
        features = np.zeros((4, 3))
        features[:, 0] = target
        sample = SyntheticSample(features, target)
        params = self.perfect_params()
        params['weight'][0] = 0.5
        report = smoothness_report(params, [sample, sample])
        self.assert_close(report.pred_variances, [0.0625, 0.0625])
        assert report.smoother_fraction == 1.0
        params['weight'][0] = 2.0
        assert smoothness_report(params, [sample]).smoother_fraction == 0.0
        assert math.isnan(smoothness_report(params, []).smoother_fraction)


class TestCheckpoint(TestBase):

    @with_rw_directory
    def test_round_trip(self, path):
        for kind, config in (('linear', LINEAR3), ('encoder', EncoderConfig(1, 4, 2, 6, 9, 3, 'hidden', True))):
            params = make_scorer(kind).init_params(config)
            for tensor in params.tensors.values():
                tensor += self.rng.normal(size=tensor.shape)
            fpath = os.path.join(path, kind + '.json')
            save_checkpoint(fpath, params)
            back = load_checkpoint(fpath)
            assert back.kind == kind and back.config == config
            assert all(np.array_equal(params[n], back[n]) for n in params)
        # END for each scorer kind

    @with_rw_directory
    def test_invalid(self, path):
        fpath = os.path.join(path, 'checkpoint.json')
        save_checkpoint(fpath, make_scorer('linear').init_params(LINEAR3))
        with open(fpath) as fp:
            doc = json.load(fp)

        def check(modified):
            write_text(fpath, json.dumps(modified))
            self.assertRaises(ParseError, load_checkpoint, fpath)

        check(dict(doc, format_version=99))
        check(dict(doc, kind='forest'))
        check(dict(doc, config=dict(doc['config'], depth=3)))
        tensors = dict(doc['tensors'])
        tensors['weight'] = {'shape': [4], 'data': [0, 0, 0, 0]}
        check(dict(doc, tensors=tensors))
        del tensors['weight']
        check(dict(doc, tensors=tensors))
        check([1, 2])
        write_text(fpath, '{"format_version": ')
        self.assertRaises(ParseError, load_checkpoint, fpath)
