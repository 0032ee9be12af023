"""The twelve node programs and a registry keyed by kernel tag."""

from imsim.engine import EngineConfig, RunResult, run_kernel
from imsim.kernels.bf import BF
from imsim.kernels.by import BY
from imsim.kernels.dp import DP
from imsim.kernels.dr import DR
from imsim.kernels.ds import DS
from imsim.kernels.dst import DST
from imsim.kernels.hs import HS
from imsim.kernels.kc import KC
from imsim.kernels.lcr import LCR
from imsim.kernels.mis import MIS
from imsim.kernels.mst import MST
from imsim.kernels.vc import VC

KERNELS = {
    cls.tag: cls
    for cls in (BF, DST, BY, DR, DS, KC, MIS, LCR, HS, DP, MST, VC)
}


def run(tag: str, g, cfg: EngineConfig | None = None, **options) -> RunResult:
    """Run the kernel named ``tag`` on ``g``."""
    try:
        cls = KERNELS[tag]
    except KeyError:
        raise ValueError(f"unknown kernel {tag!r}; choose from {sorted(KERNELS)}") from None
    return run_kernel(cls, g, cfg or EngineConfig(seed=g.seed), **options)


def kernel_bf(g, cfg=None):
    return run("bf", g, cfg)


def kernel_dst(g, cfg=None):
    return run("dst", g, cfg)


def kernel_by(g, cfg=None, inputs=None, adversary="random"):
    return run("by", g, cfg, inputs=inputs, adversary=adversary)


def kernel_dr(g, cfg=None):
    return run("dr", g, cfg)


def kernel_ds(g, cfg=None):
    return run("ds", g, cfg)


def kernel_kc(g, cfg=None, k=None):
    return run("kc", g, cfg, k=k)


def kernel_mis(g, cfg=None):
    return run("mis", g, cfg)


def kernel_lcr(g, cfg=None):
    return run("lcr", g, cfg)


def kernel_hs(g, cfg=None):
    return run("hs", g, cfg)


def kernel_dp(g, cfg=None):
    return run("dp", g, cfg)


def kernel_mst(g, cfg=None):
    return run("mst", g, cfg)


def kernel_vc(g, cfg=None):
    return run("vc", g, cfg)


__all__ = ["KERNELS", "run"] + [f"kernel_{t}" for t in KERNELS]
