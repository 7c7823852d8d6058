# cli/report.py

"""
Report assembly and rendering.

Reports are plain dicts built from the library's result dataclasses. They
contain no timestamps, so identical input, seed and flags give
byte-identical output. Sensors and links are 1-based here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from topology import __version__
from topology.augment import AddedLink, StrongConnectResult
from topology.pipeline import DesignResult
from topology.structural import DdReport, StructuralResult
from verification.pipeline import VerificationResult
from .system_file import file_sha256

FLOAT_DIGITS = 12   # rounding applied to every float in a report


@dataclass
class ReportFile:
    command      : str
    system       : str
    provenance   : dict[str, Any]
    structural   : dict[str, Any] | None = None
    dd           : dict[str, Any] | None = None
    augmentation : dict[str, Any] | None = None
    numeric      : dict[str, Any] | None = None
    extra        : dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        out = {'command': self.command, 'system': self.system, 'provenance': self.provenance}
        for key in ('structural', 'dd', 'augmentation', 'numeric'):
            section = getattr(self, key)
            if section is not None:
                out[key] = section
        out.update(self.extra)
        return _clean(out)


# ── Sections ──────────────────────────────────────────────────────────────────

def provenance(path: str | Path, seed: int | None, flags: dict[str, Any]) -> dict[str, Any]:
    return {
        'input_sha256' : file_sha256(path),
        'seed'         : seed,
        'version'      : __version__,
        'flags'        : flags,
    }


def structural_section(result: StructuralResult, sensors: list[int] | None = None) -> dict[str, Any]:
    section = {
        'observable'     : result.ok,
        'unreached'      : sorted(k + 1 for k in result.unreached),
        'deficiency'     : len(result.witness_matching.left_unmatched),
        'left_unmatched' : sorted(k + 1 for k in result.witness_matching.left_unmatched),
    }
    if sensors is not None:
        section['sensors'] = [i + 1 for i in sensors]
    return section


def dd_section(report: DdReport) -> dict[str, Any]:
    return {
        'overall_ok' : report.overall_ok,
        'reason'     : report.reason,
        'per_sensor' : [
            {
                'sensor'          : cond.sensor + 1,
                'condition_i_ok'  : cond.condition_i_ok,
                'condition_ii_ok' : cond.condition_ii_ok,
                'deficit_links'   : [j + 1 for j in cond.deficit_links],
                'mcmm_cost'       : cond.mcmm_cost,
            }
            for cond in report.per_sensor
        ],
    }


def link_entry(link: AddedLink, cost_unit: float) -> dict[str, Any]:
    return {
        'transmitter'   : link.transmitter + 1,
        'receiver'      : link.receiver + 1,
        'attributed_to' : None if link.attributed_to is None else link.attributed_to + 1,
        'cost'          : link.cost / cost_unit,
    }


def augmentation_section(design: DesignResult, cost_unit: float, cost_label: str,
                         independent_total: int | None = None) -> dict[str, Any]:
    connect: StrongConnectResult | None = design.connect
    augmentation = design.augmentation
    section: dict[str, Any] = {
        'mode'            : augmentation.weighting.value if augmentation else None,
        'order'           : augmentation.order if augmentation else None,
        'added_links'     : [link_entry(link, cost_unit) for link in design.links],
        'total_links'     : len(design.links),
        'total_cost'      : design.total_cost / cost_unit,
        'cost_unit_label' : cost_label,
        'final_comm'      : adjacency(design.final_system.comm.edges, design.final_system.m),
        'success'         : design.success,
        'error'           : design.error,
    }
    if connect is not None:
        section['strong_connectivity'] = {'alpha': connect.alpha, 'beta': connect.beta,
                                          'links': len(connect.added)}
    if independent_total is not None:
        section['independent_total_links'] = independent_total
    return section


def numeric_section(result: VerificationResult) -> dict[str, Any]:
    return {
        'observable'     : result.observable,
        'seed'           : result.seed,
        'tol'            : result.tol,
        'horizon'        : result.horizon,
        'passing_trials' : result.passing_trials,
        'trials'         : [
            {
                'trial'    : trial.trial,
                'seed'     : trial.seed,
                'w_source' : trial.w_source,
                'sensors'  : [
                    {
                        'sensor'         : s.sensor + 1,
                        'observable'     : s.pbh.observable,
                        'pbh_margin'     : s.pbh.margin,
                        'pbh_threshold'  : s.pbh.tolerance,
                        'relative_error' : s.reconstruction.relative_error,
                        'residual'       : s.reconstruction.residual,
                        'ambiguous'      : s.reconstruction.ambiguous,
                    }
                    for s in trial.sensors
                ],
            }
            for trial in result.trials
        ],
    }


def adjacency(edges, m: int) -> list[list[int]]:
    """adj[i][j] = 1 when sensor j transmits to sensor i."""
    out = np.zeros((m, m), dtype=int)
    for t, r in edges:
        out[r, t] = 1
    return out.tolist()


# ── Rendering ─────────────────────────────────────────────────────────────────

def render_json(report: ReportFile) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True) + '\n'


def render_text(report: ReportFile) -> str:
    data = report.to_dict()
    lines = [f'netobs {data["command"]} | {data["system"]}', '=' * 60]

    if 'structural' in data:
        st = data['structural']
        who = f' from sensors {st["sensors"]}' if 'sensors' in st else ''
        lines.append(f'Plant structurally observable{who}: {st["observable"]}')
        if st['unreached']:
            lines.append(f'  states reaching no output: {st["unreached"]}')
        if st['deficiency']:
            lines.append(f'  matching deficiency: {st["deficiency"]}')
    for key, value in sorted(data.items()):
        if key.startswith('structural_'):
            lines.append(f'Plant structurally observable from sensors {value["sensors"]}: {value["observable"]}')

    if 'dd' in data:
        dd = data['dd']
        lines += ['', f'DD observable: {dd["overall_ok"]}' + (f' ({dd["reason"]})' if dd['reason'] else '')]
        frame = pd.DataFrame(dd['per_sensor']).set_index('sensor') if dd['per_sensor'] else pd.DataFrame()
        if not frame.empty:
            lines.append(frame.to_string())

    if 'augmentation' in data:
        aug = data['augmentation']
        unit = aug['cost_unit_label']
        lines += ['', f'Links added: {aug["total_links"]}, total cost {aug["total_cost"]:g}{unit}']
        for link in aug['added_links']:
            why = 'connectivity' if link['attributed_to'] is None else f'sensor {link["attributed_to"]}'
            lines.append(f'  sensor {link["transmitter"]} -> sensor {link["receiver"]}'
                         f'  cost {link["cost"]:g}{unit}  ({why})')
        if aug.get('error'):
            lines.append(f'  stopped: {aug["error"]}')
        lines.append('Final communication adjacency (row = receiver):')
        lines.append(pd.DataFrame(aug['final_comm'],
                                  index=range(1, len(aug['final_comm']) + 1),
                                  columns=range(1, len(aug['final_comm']) + 1)).to_string())

    if 'numeric' in data:
        num = data['numeric']
        lines += ['', f'Numerically observable: {num["observable"]} '
                      f'({num["passing_trials"]}/{len(num["trials"])} trials, seed {num["seed"]})']
        rows = [dict(trial=t['trial'], **s) for t in num['trials'] for s in t['sensors']]
        if rows:
            lines.append(pd.DataFrame(rows).set_index(['trial', 'sensor']).to_string())

    if 'demo' in data:
        demo = data['demo']
        lines += ['', f'Demo {demo["name"]}: {"PASS" if demo["passed"] else "FAIL"}']
        lines += [f'  mismatch: {m}' for m in demo['mismatches']]

    prov = data['provenance']
    lines += ['', f'input sha256 {prov["input_sha256"][:16]}…  seed {prov["seed"]}  version {prov["version"]}']
    return '\n'.join(lines) + '\n'


def _clean(value):
    """JSON-safe copy: numpy scalars unwrapped, floats rounded, tuples listed."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if not np.isfinite(v):
            return None if np.isnan(v) else ('inf' if v > 0 else '-inf')
        return round(v, FLOAT_DIGITS)
    return value
