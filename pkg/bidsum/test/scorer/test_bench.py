# Copyright (C) 2026 The bidsum developers
#
# This module is part of bidsum and is released under
# the New BSD License: http://www.opensource.org/licenses/bsd-license.php
import numpy as np

from bidsum.exc import InvalidInput
from bidsum.metrics import kendall_tau
from bidsum.scorer.bench import (
    latent_saliency,
    make_distorted_benchmark
)
from bidsum.test.lib import TestBase


class TestBenchmark(TestBase):

    def test_determinism(self):
        a_train, a_val = make_distorted_benchmark(10, 8, seed=5, model_dim=4)
        b_train, b_val = make_distorted_benchmark(10, 8, seed=5, model_dim=4)
        assert len(a_train) == 8 and len(a_val) == 2
        for a, b in zip(a_train + a_val, b_train + b_val):
            assert np.array_equal(a.features, b.features)
            assert np.array_equal(a.target_saliency, b.target_saliency)
            assert a.video_id == b.video_id
        # END for each sample
        c_train, _ = make_distorted_benchmark(10, 8, seed=6, model_dim=4)
        assert not np.array_equal(a_train[0].features, c_train[0].features)

    def test_distorted_targets(self):
        train, validation = make_distorted_benchmark(40, 20, seed=0, model_dim=6)
        assert len(train) == 32 and len(validation) == 8
        samples = train + validation
        for index, sample in enumerate(samples):
            assert sample.features.shape == (20, 6)
            spread = np.ptp(sample.target_saliency)
            if index % 10 == 9:
                self.assert_close(spread, 0.2, 1e-12)
            else:
                assert 0.85 - 1e-12 <= spread <= 0.9 + 1e-12
            # END check scale
            assert sample.target_saliency.min() >= 0 and sample.target_saliency.max() <= 1 + 1e-12
        # END for each sample

    def test_control(self):
        train, _ = make_distorted_benchmark(5, 12, seed=1, model_dim=3, distorted=False)
        for sample in train:
            assert np.max(np.abs(sample.features[:, 0] - sample.target_saliency)) < 0.15
            assert kendall_tau(sample.features[:, 0], sample.target_saliency) > 0.5
        # END for each sample

    def test_latent_saliency(self):
        for n in (2, 5, 30):
            z = latent_saliency(self.rng, n)
            assert len(z) == n
            assert z.min() == 0.0 and z.max() == 1.0
        # END for each length

    def test_degenerate(self):
        assert make_distorted_benchmark(5, 1, seed=0) == ([], [])
        self.assertRaises(InvalidInput, make_distorted_benchmark, 5, 4, 0, 2)
        self.assertRaises(InvalidInput, make_distorted_benchmark, 0, 4, 0)
        self.assertRaises(InvalidInput, make_distorted_benchmark, 3, 0, 0)
        train, validation = make_distorted_benchmark(1, 4, seed=0)
        assert len(train) == 1 and validation == []
