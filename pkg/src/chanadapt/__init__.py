"""chanadapt: channel adaptation for multichannel electrophysiology.

Four constructions of the channel-adaptation matrix (learned projection,
spherical spline interpolation, spherical-harmonic decomposition,
Riemannian re-centering), the preprocessing around them, a synthetic
spherical-field oracle, and a nonparametric comparison battery. Served
over HTTP by ``chanadapt.service`` and driven from the shell by the
``adapt`` CLI.
"""

__version__ = "0.1.0"

from .errors import (ChanAdaptError, ChannelMismatchError, DomainError, FormatError,
                     MontageError, NumericalError, UsageError)
from .geometry import (Electrode, Montage, builtin_montage, builtin_montage_names,
                       cosine_angle, load_montage, spherical_coords)
from .basis import ShIndex, legendre_all, real_sph_harm, sh_basis_matrix
from .pipeline import (AdaptationMatrix, EpochSet, Signal, apply, compose,
                       identity_matrix, load_matrix, load_signal, normalize,
                       resample, save_matrix, save_signal)
from .ssi import SplineConfig, g_kernel, ssi_matrix
from .harmonic import HarmonicConfig, harmonic_band_power, harmonic_matrix
from .riemannian import (RiemannianConfig, SpdMatrix, epoch_covariance,
                         geometric_mean, inv_sqrt, ledoit_wolf_shrinkage,
                         recenter_matrix)
from .learned import (LearnedProjection, compose_bridge, init_projection, lsq_fit,
                      reconstruction_gradient, sgd_train)
from .oracle import SynthSpec, synth_epochs, synth_field
from .stats import (PairedSamples, bh_correct, cohens_d, friedman,
                    wilcoxon_signed_rank, within_1pp_fraction)

__all__ = [name for name in dir() if not name.startswith("_")]
