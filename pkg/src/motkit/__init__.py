from .api import (BoundingBox, CostMatrix, Detection,
                  EmptyGroundTruthException, FrameOrderException,
                  InfeasibleScenarioException, InvalidBoxException,
                  InvalidEmbeddingException, MotFormatException,
                  MotkitException, MotRecord, NoAnchorObservationException,
                  NonFiniteEvalException, Prediction, PseudoBox,
                  ShapeMismatchException)
from .core import box_convert, box_unconvert, center_distance, iou
from .motion import (KalmanTrack, MotionConfig, kf_init, kf_predict,
                     kf_update, oru_reupdate, velocity_direction)
from .association import (AssociationConfig, CRTracker, TrackBank,
                          combined_cost, solve_assignment,
                          split_cosine_similarity, track_sequence, track_step)
from .asa import (AsaConfig, AsaResult, AsaWeights, asa_assign,
                  build_cost_matrix, pair_cost, pseudo_consistency_check)
from .ssl_loss import (BatchComposition, LossBreakdown, LossWeights,
                       frame_loss, labeled_loss, total_loss, unlabeled_loss)
from .anu import (AnuState, EmaConfig, anu_epoch, anu_init, anu_run,
                  ema_update)
from .augment import AugmentParams, AugmentRanges, enhance, sample_params
from .metrics import (MetricConfig, MetricReport, clear_metrics,
                      detection_ap, hota, idf1)
from .synth import CorruptionModel, ScenarioSpec, corrupt, generate_gt
