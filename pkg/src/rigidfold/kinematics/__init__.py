from .construct import FoldRecipe, build_fold_state, fold_core_birds_foot, insert_crease, plan_fold, realize
from .linkage import (
    SIGN_FLOOR,
    SOLVER_TOL,
    FoldState,
    closure_product,
    closure_residual,
    crease_vectors,
    fold_angles_from_vectors,
    squared_residual_gradient,
)
from .solver import refine_fold_state
from .pop import PopSide, separation_margin, verify_pop
from .trajectory import Trajectory, folding_trajectory
