"""Figure presets: parameter bundles matching the reference figure captions."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import cos, pi, sin


@dataclass(frozen=True)
class FigurePreset:
    """One figure panel: which subcommand reproduces it and with what inputs."""

    figure_id: str
    subcommand: str
    caption: str
    params: dict = field(default_factory=dict)
    scan: dict = field(default_factory=dict)


def _resonant(theta: float) -> dict:
    # hbar*omega0/E_q = 1 with omega0 = 1
    return {"delta": cos(theta), "eps": sin(theta), "omega0": 1.0}


def _eq(e_q: float, theta: float) -> dict:
    return {"delta": e_q * cos(theta), "eps": e_q * sin(theta), "omega0": 1.0}


THETAS = {"a": 0.0, "b": pi / 6.0, "c": pi / 3.0}

FIGURE_PRESETS: dict[str, FigurePreset] = {}


def _add(preset: FigurePreset):
    FIGURE_PRESETS[preset.figure_id] = preset


for _panel, _theta in THETAS.items():
    _add(FigurePreset(
        f"fig3{_panel}", "spectrum",
        f"lowest 10 levels, resonant hbar*omega0/E_q=1, theta={_theta:.4f}",
        params=_resonant(_theta),
        scan={"lam_min": 0.0, "lam_max": 2.5, "lam_steps": 126, "levels": 10,
              "unit": "omega0"},
    ))

for _fid in ("fig4a", "fig4b"):
    _add(FigurePreset(
        _fid, "splitting",
        "E2-E1 vs coupling, resonant, theta in {0, pi/6, pi/3}"
        + (" (log-scale view with exp(-2 x^2) overlay)" if _fid == "fig4b" else ""),
        params={"thetas": [0.0, pi / 6.0, pi / 3.0], "e_q": 1.0},
        scan={"lam_min": 0.0, "lam_max": 2.5, "lam_steps": 126, "pair": 0,
              "unit": "omega0"},
    ))

for _panel, _theta in THETAS.items():
    _add(FigurePreset(
        f"fig5{_panel}", "splitting",
        f"pair splittings n=0..3 in units of E_q, hbar*omega0/E_q=10, theta={_theta:.4f}",
        params=_eq(0.1, _theta),
        scan={"lam_min": 0.0, "lam_max": 1.6, "lam_steps": 161,
              "pairs": [0, 1, 2, 3], "unit": "eq"},
    ))

for _panel, _theta in THETAS.items():
    _add(FigurePreset(
        f"fig6{_panel}", "spectrum",
        f"lowest 10 levels, hbar*omega0/E_q=0.01, theta={_theta:.4f}",
        params=_eq(100.0, _theta),
        scan={"lam_min": 0.0, "lam_max": 8.0, "lam_steps": 41, "levels": 10,
              "unit": "omega0"},
    ))

_add(FigurePreset(
    "fig7", "spectrum",
    "lowest 10 levels, hbar*omega0/E_q=10, theta=0",
    params=_eq(0.1, 0.0),
    scan={"lam_min": 0.0, "lam_max": 1.6, "lam_steps": 81, "levels": 10,
          "unit": "omega0"},
))

_FIG8_LAM = {"a": 0.5, "b": 0.5, "c": 2.0, "d": 2.0,
             "e": 2.5, "f": 2.5, "g": 3.5, "h": 3.5}
for _panel, _lam in _FIG8_LAM.items():
    _kind = "qfunc" if _panel in "aceg" else "wigner"
    _add(FigurePreset(
        f"fig8{_panel}", _kind,
        f"{'Q' if _kind == 'qfunc' else 'Wigner'} function of the ground-state"
        f" oscillator, hbar*omega0/Delta=0.1, eps=0, lam/(hbar*omega0)={_lam}",
        params={"delta": 10.0, "eps": 0.0, "omega0": 1.0, "lam": _lam},
        scan={"grid_points": 201},
    ))

_RATIOS = {"a": 0.1, "b": 1.0, "c": 10.0}
for _panel, _ratio in _RATIOS.items():
    for _fig, _cmd in (("fig9", "squeezing"), ("fig10", "entropy")):
        _add(FigurePreset(
            f"{_fig}{_panel}", _cmd,
            f"{'momentum squeezing s_p' if _cmd == 'squeezing' else 'qubit entropy S'}"
            f" vs coupling, hbar*omega0/Delta={_ratio}, eps/Delta in {{0, 0.1, 0.5, 1}}",
            params={"delta": 1.0 / _ratio, "omega0": 1.0,
                    "eps_fracs": [0.0, 0.1, 0.5, 1.0]},
            scan={"lam_min": 0.0, "lam_max": 3.0, "lam_steps": 60},
        ))

_add(FigurePreset(
    "fig11", "squeezing",
    "variance product K vs coupling, hbar*omega0/Delta=0.1, eps/Delta in"
    " {0, 0.1, 0.5, 1} (K view of the squeezing-scan schema)",
    params={"delta": 10.0, "omega0": 1.0, "eps_fracs": [0.0, 0.1, 0.5, 1.0]},
    scan={"lam_min": 0.0, "lam_max": 3.0, "lam_steps": 60},
))

_add(FigurePreset(
    "fig12", "onset",
    "coupling at which the ground-state entropy reaches 0.1 and 0.5 vs"
    " hbar*omega0/Delta, with sqrt(hbar*omega0*E_q)/2 and hbar*omega0 guide lines",
    params={"targets": [0.1, 0.5]},
    scan={"ratio_min": 0.01, "ratio_max": 100.0, "ratio_points": 9},
))
