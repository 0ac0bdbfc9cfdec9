"""Image restoration with combined first/second-order TV regularisation.

Denoising, deblurring and inpainting via the split Bregman method, with
exact discrete gradient/Hessian stencils, their adjoint divergences,
closed-form shrinkage operators and SSIM/PSNR quality metrics.
"""

from .backend import BACKEND_NAME
from .forward import CircularBlurOp, ForwardOp, IdentityOp, MaskOp, gaussian_kernel
from .grid import (
    GradientField,
    HessianField,
    ShapeMismatchError,
    aniso_l1,
    as_image,
    divergence,
    divergence_h,
    gradient,
    group_l1,
    hessian,
    inner_product,
    l2_norm,
)
from .imgio import (
    NetpbmParseError,
    export_slice,
    load_mask,
    luma,
    read_image,
    write_image,
)
from .prox import shrink_field_aniso, shrink_field_iso, shrink_scalar, shrink_vector
from .quality import SsimParams, psnr, ssim
from .solver import (
    SolverConfig,
    SolverDivergenceError,
    SolverTrace,
    apply_system,
    cg_solve,
    solve_l1,
    solve_l2_aniso,
    solve_l2_iso,
    solve_l2_iso_alt,
    solve_rgb,
)
from .synth import NoiseSpec, add_noise, make_geometric, make_stripe

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME",
    "CircularBlurOp",
    "ForwardOp",
    "GradientField",
    "HessianField",
    "IdentityOp",
    "MaskOp",
    "NetpbmParseError",
    "NoiseSpec",
    "ShapeMismatchError",
    "SolverConfig",
    "SolverDivergenceError",
    "SolverTrace",
    "SsimParams",
    "add_noise",
    "aniso_l1",
    "apply_system",
    "as_image",
    "cg_solve",
    "divergence",
    "divergence_h",
    "export_slice",
    "gaussian_kernel",
    "gradient",
    "group_l1",
    "hessian",
    "inner_product",
    "l2_norm",
    "load_mask",
    "luma",
    "make_geometric",
    "make_stripe",
    "psnr",
    "read_image",
    "shrink_field_aniso",
    "shrink_field_iso",
    "shrink_scalar",
    "shrink_vector",
    "solve_l1",
    "solve_l2_aniso",
    "solve_l2_iso",
    "solve_l2_iso_alt",
    "solve_rgb",
    "ssim",
    "write_image",
]
