"""Figures for a finished report, written as PNG files with the Agg backend."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.ticker import MaxNLocator  # noqa: E402

SCAN_STYLE = {"scan-MN": ("o", "C0"), "scan-MP": ("s", "C1"), "scan-MQ": ("^", "C2"), "scan-PQ": ("d", "C3")}


def _certs(report: dict) -> dict[str, dict]:
    out = {c["name"]: c for c in report["certificates"]}
    out.update({c["name"]: c for c in report.get("experiments", [])})
    return out


def plot_scans(report: dict, path: Path) -> Path | None:
    """Mod-p kernel dimension of the minor multiplication maps against total degree."""
    certs = _certs(report)
    scans = [n for n in SCAN_STYLE if n in certs]
    if not scans:
        return None
    fig, ax = plt.subplots(figsize=(6, 3.6))
    for name in scans:
        dims = certs[name]["data"].get("kernel_dims_mod_p", {})
        if not dims:
            continue
        ds = sorted(int(d) for d in dims)
        marker, color = SCAN_STYLE[name]
        ax.plot(ds, [dims[str(d)] for d in ds], marker=marker, color=color, ms=4, lw=1,
                label=name.split("-", 1)[1] + "'")
    ax.set_xlabel("total degree D")
    ax.set_ylabel("kernel dimension mod p")
    ax.yaxis.set_major_locator(MaxNLocator(integer=True))
    ax.set_title("First syzygies of the reduced minors")
    ax.legend(frameon=False)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_cases(report: dict, path: Path) -> Path | None:
    """Per degree k: dim ker(df ^) bounds and the second-page dimension."""
    certs = _certs(report)
    ks, wedge, e2 = [], [], []
    for case in report["cases"]:
        k = case["k"]
        ks.append(k)
        c = certs.get(f"wedge-kernel-k{k}")
        if c is not None and c["data"].get("kernel_dim_upper_bound") is not None:
            wedge.append(c["data"]["kernel_dim_upper_bound"])
        else:
            p = certs.get(f"param-rank-k{k}")
            wedge.append(p["data"]["cols"] if p and p["verdict"] == "Proved" else 0)
        e2.append(case["e2_dim"] if case["e2_dim"] is not None else float("nan"))
    fig, ax = plt.subplots(figsize=(6, 3.6))
    width = 3.0
    ax.bar([k - width / 2 for k in ks], [w + 1 for w in wedge], width, color="C0", label="dim ker(df ^) + 1")
    ax.bar([k + width / 2 for k in ks], [e + 1 for e in e2], width, color="C3", label="dim E2 + 1")
    ax.set_yscale("log")
    ax.set_xticks(ks)
    ax.set_xlabel("degree k")
    ax.set_title("Koszul kernels and second-page terms")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_all(report: dict, out_dir: Path) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    made = [plot_scans(report, out_dir / "scans.png"), plot_cases(report, out_dir / "cases.png")]
    return [p for p in made if p is not None]
