# Copyright (C) 2026 The bidsum developers
#
# This module is part of bidsum and is released under
# the New BSD License: http://www.opensource.org/licenses/bsd-license.php
"""Synthetic benchmark on which absolute score regression is misleading.

Every video has a latent saliency ``z`` in [0, 1]. Features carry ``z`` split
into a lower channel ``min(z, 0.7)`` and an upper channel ``max(z - 0.7, 0)``,
plus a channel revealing the per-video target offset, all other channels are
noise. Targets are ``a * z + b`` with a per-video scale ``a`` and offset ``b``,
a tenth of the videos being nearly flat. The ranking within each video is that
of ``z`` in any case."""
import logging

import numpy as np

from bidsum.exc import InvalidInput
from bidsum.fun import normalize_scores
from bidsum.scorer.base import SyntheticSample

log = logging.getLogger(__name__)

__all__ = ('make_distorted_benchmark', 'latent_saliency')

#{ Configuration
# saturation level of the lower feature channel
SPLIT_LEVEL = 0.7
FEATURE_NOISE = 0.1
CONTROL_NOISE = 0.02
# scale range of regular videos, and the scale of every flat_every'th video
SCALE_RANGE = (0.85, 0.9)
FLAT_SCALE = 0.2
FLAT_EVERY = 10
VALIDATION_FRACTION = 0.2
#} END configuration


def latent_saliency(rng, num_clips):
    """:return: array of num_clips values in [0, 1] formed by a few gaussian bumps"""
    pos = np.arange(num_clips, dtype=np.float64)
    z = np.zeros(num_clips)
    for _ in range(rng.integers(1, 4)):
        center = rng.uniform(0, num_clips)
        width = rng.uniform(1.0, max(1.0, num_clips / 4.0))
        z += rng.uniform(0.5, 1.0) * np.exp(-0.5 * ((pos - center) / width) ** 2)
    # END for each bump
    return normalize_scores(z)


def make_distorted_benchmark(num_videos, clips_per_video, seed, model_dim=16, distorted=True,
                             validation_fraction=VALIDATION_FRACTION):
    """Generate training and validation videos.

    :param distorted: if False, the control condition is generated: features
        carry z with little noise and targets equal z
    :return: tuple(train, validation) lists of SyntheticSample, both empty if
        clips_per_video is below 2 as single clip videos have no ranking
    :raise InvalidInput: on non-positive counts or a model_dim below 3"""
    if num_videos < 1 or clips_per_video < 1:
        raise InvalidInput("counts must be positive, got %r videos of %r clips" % (num_videos, clips_per_video))
    if model_dim < 3:
        raise InvalidInput("model_dim must be at least 3, got %r" % (model_dim, ))
    if clips_per_video < 2:
        log.warning("no benchmark videos generated: %i clip videos cannot be ranked", clips_per_video)
        return list(), list()
    # END handle degenerate videos

    rng = np.random.default_rng(seed)
    samples = list()
    for index in range(num_videos):
        z = latent_saliency(rng, clips_per_video)
        noise = rng.normal(0.0, FEATURE_NOISE, size=(clips_per_video, model_dim))
        if distorted:
            if index % FLAT_EVERY == FLAT_EVERY - 1:
                scale = FLAT_SCALE
            else:
                scale = rng.uniform(*SCALE_RANGE)
            offset = rng.uniform(0.0, 1.0 - scale)
            features = noise
            features[:, 0] += np.minimum(z, SPLIT_LEVEL)
            features[:, 1] += np.maximum(z - SPLIT_LEVEL, 0.0)
            features[:, 2] += offset
            target = scale * z + offset
        else:
            features = noise
            features[:, 0] = z + rng.normal(0.0, CONTROL_NOISE, size=clips_per_video)
            target = z
        # END handle condition
        samples.append(SyntheticSample(features, target, "v%04i" % index))
    # END for each video

    num_validation = int(round(num_videos * validation_fraction))
    if num_validation >= num_videos:
        num_validation = num_videos - 1
    split = num_videos - num_validation
    log.debug("generated %i training and %i validation videos", split, num_validation)
    return samples[:split], samples[split:]
