from __future__ import annotations

from typing import Any

import numpy as np
import torch

from ..domain.neural import MaskNetwork, NormalizationStats
from ..domain.shared import CheckpointFormatError, FilterDims, InvalidDimensionError
from ..domain.training import AdamSettings, OptimizerState
from .checkpoint import Checkpoint

NETWORK_PREFIX = "network."
NU = "normalization.nu"
SIGMA = "normalization.sigma"
EXP_AVG = "optimizer.exp_avg"
EXP_AVG_SQ = "optimizer.exp_avg_sq"

_TORCH_DTYPES = {"float32": torch.float32, "float64": torch.float64}


def _f32(tensor: torch.Tensor) -> np.ndarray:
    return tensor.detach().to(torch.float32).cpu().numpy().copy()


def checkpoint_from_training(
    network: MaskNetwork,
    stats: NormalizationStats,
    dims: FilterDims,
    *,
    variant: str,
    epoch: int = 0,
    seed: int = 0,
    optimizer: OptimizerState | None = None,
    extra: dict[str, Any] | None = None,
) -> Checkpoint:
    tensors: dict[str, np.ndarray] = {
        f"{NETWORK_PREFIX}{name}": _f32(param) for name, param in network.named_parameters()
    }
    tensors[NU] = _f32(stats.nu)
    tensors[SIGMA] = _f32(stats.sigma)
    meta: dict[str, Any] = {
        "variant": variant,
        "fft_size": dims.fft_size,
        "hop": dims.hop,
        "hidden_size": network.hidden_size,
        "epoch": epoch,
        "seed": seed,
        "optimizer_step": optimizer.step if optimizer else 0,
        "init": "uniform(+-1/sqrt(fan_in)), zero biases",
    }
    if optimizer is not None:
        tensors[EXP_AVG] = _f32(optimizer.exp_avg)
        tensors[EXP_AVG_SQ] = _f32(optimizer.exp_avg_sq)
        meta["adam"] = {
            "learning_rate": optimizer.settings.learning_rate,
            "beta1": optimizer.settings.beta1,
            "beta2": optimizer.settings.beta2,
            "eps": optimizer.settings.eps,
            "clip_norm": optimizer.settings.clip_norm,
        }
    if extra:
        meta.update(extra)
    return Checkpoint(meta=meta, tensors=tensors)


def _meta_int(checkpoint: Checkpoint, key: str) -> int:
    try:
        return int(checkpoint.meta[key])
    except (KeyError, TypeError, ValueError) as exc:
        raise CheckpointFormatError(f"checkpoint metadata lacks a valid '{key}'") from exc


def dims_from_checkpoint(checkpoint: Checkpoint) -> FilterDims:
    try:
        return FilterDims(_meta_int(checkpoint, "fft_size"), _meta_int(checkpoint, "hop"))
    except InvalidDimensionError as exc:
        raise CheckpointFormatError(f"checkpoint dimensions are invalid: {exc}") from exc


def network_from_checkpoint(
    checkpoint: Checkpoint,
    *,
    dims: FilterDims | None = None,
    dtype: str = "float64",
) -> tuple[MaskNetwork, NormalizationStats]:
    """Rebuilds the network and stats; every stored shape is validated against (M, P) first."""
    stored = dims_from_checkpoint(checkpoint)
    if dims is not None and stored != dims:
        raise CheckpointFormatError(
            f"checkpoint was trained for M={stored.fft_size}, R={stored.hop}; run uses M={dims.fft_size}, R={dims.hop}"
        )
    network = MaskNetwork.for_dims(stored, _meta_int(checkpoint, "hidden_size")).to(_TORCH_DTYPES[dtype])
    state = {}
    for name, param in network.named_parameters():
        key = f"{NETWORK_PREFIX}{name}"
        array = checkpoint.tensors.get(key)
        if array is None:
            raise CheckpointFormatError(f"checkpoint lacks tensor {key}")
        if tuple(array.shape) != tuple(param.shape):
            raise CheckpointFormatError(f"tensor {key}: shape {tuple(array.shape)}, expected {tuple(param.shape)}")
        state[name] = torch.from_numpy(np.array(array)).to(param.dtype)
    extra = sorted(k for k in checkpoint.tensors if k.startswith(NETWORK_PREFIX) and k[len(NETWORK_PREFIX):] not in state)
    if extra:
        raise CheckpointFormatError(f"checkpoint holds unknown network tensors: {', '.join(extra)}")
    network.load_state_dict(state)
    network.eval()

    for key in (NU, SIGMA):
        if key not in checkpoint.tensors:
            raise CheckpointFormatError(f"checkpoint lacks tensor {key}")
        if checkpoint.tensors[key].shape != (stored.feature_size,):
            raise CheckpointFormatError(
                f"tensor {key}: shape {checkpoint.tensors[key].shape}, expected ({stored.feature_size},)"
            )
    stats = NormalizationStats(
        nu=torch.from_numpy(np.array(checkpoint.tensors[NU])).to(torch.float64),
        sigma=torch.from_numpy(np.array(checkpoint.tensors[SIGMA])).to(torch.float64),
    )
    return network, stats


def optimizer_state_from_checkpoint(checkpoint: Checkpoint, settings: AdamSettings) -> OptimizerState | None:
    if EXP_AVG not in checkpoint.tensors or EXP_AVG_SQ not in checkpoint.tensors:
        return None
    return OptimizerState(
        exp_avg=torch.from_numpy(np.array(checkpoint.tensors[EXP_AVG])).to(torch.float64),
        exp_avg_sq=torch.from_numpy(np.array(checkpoint.tensors[EXP_AVG_SQ])).to(torch.float64),
        step=_meta_int(checkpoint, "optimizer_step"),
        settings=settings,
    )


def checkpoint_summary(checkpoint: Checkpoint) -> dict[str, Any]:
    tensors = {name: list(array.shape) for name, array in checkpoint.tensors.items()}
    parameters = sum(int(a.size) for n, a in checkpoint.tensors.items() if n.startswith(NETWORK_PREFIX))
    return {"version": checkpoint.version, "meta": dict(checkpoint.meta), "parameters": parameters, "tensors": tensors}
