"""Torch model mirroring the inference engine's layer plan.

The module dict is keyed by canonical layer names (L00, L01, ...;
network input excluded from the numbering), so exporting weights is a
mechanical walk over the plan.  Semantics match the engine exactly:
"same" padding puts the smaller pad on the left, causal convolutions
prepend (K-1)*d zeros, batch norm uses eps 1e-3, ELU alpha 1, and the
residual blocks have no activation after the add.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import torch
import torch.nn.functional as F
from torch import nn

from .hyperparams import HyperParams

BN_EPS = 1e-3
NETWORK_INPUT = -1


@dataclass
class PlanStep:
    kind: str
    input_index: int
    cfg: dict = field(default_factory=dict)


def build_plan(hp: HyperParams, family: str) -> list[PlanStep]:
    steps: list[PlanStep] = []

    def add(kind, input_index=None, **cfg):
        src = len(steps) - 1 if input_index is None else input_index
        steps.append(PlanStep(kind, src, cfg))
        return len(steps) - 1

    add("Conv2DSame", filters=hp.F1, kernel=(1, hp.K_E))
    add("BatchNorm2d", channels=hp.F1)
    add("DepthwiseConv2D", in_channels=hp.F1, depth_multiplier=2, height=hp.C)
    add("BatchNorm2d", channels=2 * hp.F1)
    add("EluAct")
    add("AvgPool2D", pool=8)
    add("Dropout", rate=hp.p_e)
    add("SeparableConv2D", in_channels=2 * hp.F1, filters=hp.F2, kernel=16)
    add("BatchNorm2d", channels=hp.F2)
    add("EluAct")
    add("AvgPool2D", pool=8)
    add("Dropout", rate=hp.p_e)
    if family == "eegnet":
        add("Flatten")
        add("Dense", in_features=hp.F2 * ((hp.T // 8) // 8), units=hp.n_classes)
        add("SoftmaxAct")
        return steps
    depth = hp.F2
    for i in range(hp.L):
        block_input = len(steps) - 1
        add("CausalConv1D", in_channels=depth, filters=hp.F_T, kernel=hp.K_T, dilation=2 ** i)
        add("BatchNorm1d", channels=hp.F_T)
        add("EluAct")
        add("Dropout", rate=hp.p_t)
        add("CausalConv1D", in_channels=hp.F_T, filters=hp.F_T, kernel=hp.K_T, dilation=2 ** i)
        add("BatchNorm1d", channels=hp.F_T)
        add("EluAct")
        main = add("Dropout", rate=hp.p_t)
        if depth != hp.F_T:
            skip = add("PointwiseConv1D", in_channels=depth, filters=hp.F_T,
                       input_index=block_input)
        else:
            skip = block_input
        add("Add", input_index=main, skip=skip)
        depth = hp.F_T
    add("SliceLastTimestep")
    add("Dense", in_features=hp.F_T, units=hp.n_classes)
    add("SoftmaxAct")
    return steps


def layer_name(index: int) -> str:
    return f"L{index:02d}"


class EEGClassifier(nn.Module):
    """Either family, selected by ``family``; forward returns logits."""

    def __init__(self, hp: HyperParams, family: str = "eeg_tcnet"):
        super().__init__()
        self.hp = hp
        self.family = family
        self.plan = build_plan(hp, family)
        ops = {}
        for i, step in enumerate(self.plan):
            name, kind, cfg = layer_name(i), step.kind, step.cfg
            if kind == "Conv2DSame":
                ops[name] = nn.Conv2d(1, cfg["filters"], cfg["kernel"], bias=False)
            elif kind == "BatchNorm2d":
                ops[name] = nn.BatchNorm2d(cfg["channels"], eps=BN_EPS)
            elif kind == "BatchNorm1d":
                ops[name] = nn.BatchNorm1d(cfg["channels"], eps=BN_EPS)
            elif kind == "DepthwiseConv2D":
                cin, dm = cfg["in_channels"], cfg["depth_multiplier"]
                ops[name] = nn.Conv2d(cin, cin * dm, (cfg["height"], 1),
                                      groups=cin, bias=False)
            elif kind == "SeparableConv2D":
                cin = cfg["in_channels"]
                ops[name + "_dw"] = nn.Conv2d(cin, cin, (1, cfg["kernel"]),
                                              groups=cin, bias=False)
                ops[name + "_pw"] = nn.Conv2d(cin, cfg["filters"], 1, bias=False)
            elif kind == "CausalConv1D":
                ops[name] = nn.Conv1d(cfg["in_channels"], cfg["filters"], cfg["kernel"],
                                      dilation=cfg["dilation"], bias=True)
            elif kind == "PointwiseConv1D":
                ops[name] = nn.Conv1d(cfg["in_channels"], cfg["filters"], 1, bias=True)
            elif kind == "Dropout":
                ops[name] = nn.Dropout(cfg["rate"])
            elif kind == "Dense":
                ops[name] = nn.Linear(cfg["in_features"], cfg["units"])
        self.ops = nn.ModuleDict(ops)
        self.reset_parameters()

    def reset_parameters(self) -> None:
        # filter kernels start from the uniform fan-in scheme
        for m in self.modules():
            if isinstance(m, (nn.Conv1d, nn.Conv2d, nn.Linear)):
                nn.init.kaiming_uniform_(m.weight, nonlinearity="relu")
                if m.bias is not None:
                    nn.init.zeros_(m.bias)

    @staticmethod
    def _same_pad(x: torch.Tensor, k: int) -> torch.Tensor:
        return F.pad(x, ((k - 1) // 2, k // 2))

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        # x: (N, 1, C, T)
        bufs = [x]
        for i, step in enumerate(self.plan):
            name, kind, cfg = layer_name(i), step.kind, step.cfg
            h = bufs[step.input_index + 1]
            if kind == "Conv2DSame":
                out = self.ops[name](self._same_pad(h, cfg["kernel"][1]))
            elif kind in ("BatchNorm2d", "BatchNorm1d", "DepthwiseConv2D",
                          "Dropout", "Dense"):
                out = self.ops[name](h)
            elif kind == "PointwiseConv1D":
                if h.dim() == 4:
                    h = h.squeeze(2)
                out = self.ops[name](h)
            elif kind == "EluAct":
                out = F.elu(h)
            elif kind == "AvgPool2D":
                out = F.avg_pool2d(h, (1, cfg["pool"]))
            elif kind == "SeparableConv2D":
                out = self.ops[name + "_pw"](
                    self.ops[name + "_dw"](self._same_pad(h, cfg["kernel"])))
            elif kind == "CausalConv1D":
                if h.dim() == 4:            # (N, C, 1, T) -> (N, C, T)
                    h = h.squeeze(2)
                pad = (cfg["kernel"] - 1) * cfg["dilation"]
                out = self.ops[name](F.pad(h, (pad, 0)))
            elif kind == "Add":
                skip = bufs[cfg["skip"] + 1]
                if skip.dim() == 4:
                    skip = skip.squeeze(2)
                out = h + skip
            elif kind == "SliceLastTimestep":
                out = h[:, :, -1]
            elif kind == "Flatten":
                out = h.flatten(1)
            elif kind == "SoftmaxAct":
                out = h                      # logits out; the loss applies softmax
            else:
                raise ValueError(kind)
            bufs.append(out)
        return bufs[-1]

    def named_canonical_tensors(self) -> list[tuple[str, "torch.Tensor"]]:
        """(canonical name, tensor) in container order."""
        rows: list[tuple[str, torch.Tensor]] = []
        for i, step in enumerate(self.plan):
            name, kind = layer_name(i), step.kind
            if kind == "Conv2DSame":
                rows.append((f"{name}.weight", self.ops[name].weight))
            elif kind == "DepthwiseConv2D":
                cin, dm = step.cfg["in_channels"], step.cfg["depth_multiplier"]
                w = self.ops[name].weight            # (cin*dm, 1, C, 1)
                rows.append((f"{name}.weight", w.reshape(cin, dm, w.shape[2], 1)))
            elif kind == "SeparableConv2D":
                cin = step.cfg["in_channels"]
                dw = self.ops[name + "_dw"].weight   # (cin, 1, 1, K)
                rows.append((f"{name}.depthwise", dw.reshape(cin, 1, 1, dw.shape[3])))
                rows.append((f"{name}.pointwise", self.ops[name + "_pw"].weight))
            elif kind in ("BatchNorm2d", "BatchNorm1d"):
                bn = self.ops[name]
                rows.append((f"{name}.gamma", bn.weight))
                rows.append((f"{name}.beta", bn.bias))
                rows.append((f"{name}.mean", bn.running_mean))
                rows.append((f"{name}.var", bn.running_var))
            elif kind in ("CausalConv1D", "PointwiseConv1D", "Dense"):
                rows.append((f"{name}.weight", self.ops[name].weight))
                rows.append((f"{name}.bias", self.ops[name].bias))
        return rows

    def parameter_total(self) -> int:
        """Learned parameters plus batch-norm moving statistics; matches
        the engine's accounting of the exported container."""
        return sum(t.numel() for _, t in self.named_canonical_tensors())
