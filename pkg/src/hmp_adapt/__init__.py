"""Motion-capture-consistent retargeting of estimated 3D human poses and
test-domain-aware training of a small motion predictor."""

__version__ = "0.1.0"

from .skeleton import (Skeleton, default_skeleton, load_skeleton, save_skeleton,
                       traversal_order, validate)
from .motion_io import (Motion, downsample, read_motion, remove_global, write_motion)
from .retarget import (JointRegressor, bone_lengths, load_regressor, regress_joints,
                       save_regressor, scale_fit)
from .metrics import (HorizonReport, evaluate_horizons, horizon_loss, mpjpe_frame)
from .predictor import (PredictorModel, TrainConfig, dct, grad_check, idct,
                        init_model, load_model, predict, save_model, train,
                        zero_velocity)
from .synth import (EstimationNoise, MotionFamily, corrupt_as_estimated,
                    default_families, gen_motion, rest_pose)
from .harness import (ConditionResult, CorpusConfig, ExperimentConfig, ResultsTable,
                      default_experiment_config,
                      build_training_set, generate_corpus, load_corpus,
                      make_matrix_configs, run_condition, run_matrix, save_corpus)

__all__ = [name for name in dir() if not name.startswith("_")]
