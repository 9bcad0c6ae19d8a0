# Copyright (C) 2026 The bidsum developers
#
# This module is part of bidsum and is released under
# the New BSD License: http://www.opensource.org/licenses/bsd-license.php
"""Module containing the string constants known to the toolkit"""

#{ Splits
str_train_split = 'train'
str_validation_split = 'validation'
str_test_split = 'test'

split_names = (str_train_split, str_validation_split, str_test_split)
#} END splits

#{ Rejection reasons
str_reject_no_segments = 'no_segments'
str_reject_low_coverage = 'low_coverage'
str_reject_duplicate = 'duplicate'
#} END rejection reasons

#{ Loss kinds
str_mse_loss = 'mse'
str_neural_ndcg_loss = 'neural_ndcg'

loss_kinds = (str_mse_loss, str_neural_ndcg_loss)
# spellings accepted on the command line
loss_aliases = {'neuralndcg': str_neural_ndcg_loss}
#} END loss kinds

#{ Scorer kinds
str_linear_scorer = 'linear'
str_encoder_scorer = 'encoder'

scorer_kinds = (str_linear_scorer, str_encoder_scorer)
#} END scorer kinds

#{ Regressor inputs
str_regress_gates = 'gates'
str_regress_hidden = 'hidden'
#} END regressor inputs

#{ Metric fields, in report order
metric_fields = (
    'ndcg_vm@15', 'ndcg_vm@all',
    'ndcg_tm@15', 'ndcg_tm@all',
    'ndcg_ms@15', 'ndcg_ms@all',
    'kendall_tau', 'spearman_rho', 'f_score',
)
#} END metric fields

#{ Optimizers
str_sgd_optimizer = 'sgd'
str_adam_optimizer = 'adam'

optimizer_kinds = (str_sgd_optimizer, str_adam_optimizer)
#} END optimizers

#{ Benchmarks
str_distorted_benchmark = 'distorted'
str_control_benchmark = 'control'

benchmark_kinds = (str_distorted_benchmark, str_control_benchmark)
#} END benchmarks
