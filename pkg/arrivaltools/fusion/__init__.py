from .scoring import BBoxVectorSet, HitLedger, partial_hit, alignment_distance, \
                     score_frame_df, score_frame_mlf, classify, score_corpus, \
                     DEFAULT_SIGMA, DEFAULT_GATE
from .corpus import CorpusConfig, ClusterTrack, DetectionCorpus, \
                    generate_detection_corpus
from .roc import RocPoint, roc_curve, roc_dominance, operating_point, \
                 best_hit_rate, roc_to_frame
