"""
signmine: unsupervised phoneme mining for continuous signing.

Stages: ingest -> phonology -> segment -> metric -> cluster / seqmatch.
The synth package generates scripted keypoint sequences with ground truth.
"""

__version__ = "0.1.0"
