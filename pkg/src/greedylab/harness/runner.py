"""Run every configured suite over the oracle grid, and replay stored failures."""

from __future__ import annotations

import json
import logging
import time
import traceback
from pathlib import Path

from ..normed_space import NormOracle, parse_norm_spec
from . import checks
from .config import VerifyConfig
from .report import CheckReport, report_document

log = logging.getLogger(__name__)


def make_ctx(config: VerifyConfig, norm_spec: str, oracle: NormOracle | None = None) -> checks.Ctx:
    oracle = oracle or parse_norm_spec(norm_spec)
    return checks.Ctx(oracle=oracle, norm_spec=norm_spec, n=config.dim, seed=config.seed,
                      consts=checks.Constants(oracle, config.constants), tol_closed=config.tol_closed,
                      tol_solver=config.tol_solver, solver_vectors=config.solver_vectors)


def run_all(config: VerifyConfig, oracles: dict[str, NormOracle] | None = None) -> list[CheckReport]:
    """All checks, serially and in a fixed order so reports are reproducible byte for byte."""
    oracles = oracles or {}
    m_grid = range(1, config.m_max + 1)
    reports: list[CheckReport] = []
    for spec in config.norms:
        ctx = make_ctx(config, spec, oracles.get(spec))
        for suite in config.suites:
            t0 = time.perf_counter()
            try:
                reports.extend(checks.run_suite(suite, ctx, m_grid, config.tau_grid, config.trials_per_m))
            except Exception as err:  # recorded, and the run continues
                rep = CheckReport(f"{suite}-error", suite, spec, {"seed": config.seed}, "error", status="fail",
                                  reason=f"{type(err).__name__}: {err}")
                rep.violations.append({"traceback": traceback.format_exc(limit=5)})
                rep.violation_count = 1
                reports.append(rep)
            log.info("%s %s done in %.1fs", spec, suite, time.perf_counter() - t0)
    return reports


def run_document(config: VerifyConfig, oracles=None) -> tuple[dict, list[CheckReport]]:
    reports = run_all(config, oracles)
    return report_document(config.to_json(), reports), reports


def any_failed(reports) -> bool:
    return any(r.status == "fail" for r in reports)


def replay(source, oracle: NormOracle | None = None) -> list[dict]:
    """Re-evaluate every stored pointwise violation of a report (path, document or report list).

    Returns one record per violation with the recomputed sides and whether it
    still violates under the same tolerance rule.
    """
    if isinstance(source, (str, Path)):
        source = json.loads(Path(source).read_text())
    docs = source["reports"] if isinstance(source, dict) else source
    cfg = VerifyConfig.from_json(source.get("config", {})) if isinstance(source, dict) else VerifyConfig()
    out = []
    cache: dict[str, NormOracle] = {}
    for d in docs:
        rep = d if isinstance(d, CheckReport) else CheckReport.from_json(d)
        if rep.check_id not in checks.POINTWISE:
            continue
        spec = checks.POINTWISE[rep.check_id]
        orc = oracle or cache.setdefault(rep.oracle, parse_norm_spec(rep.oracle))
        tol = cfg.tol_solver if (spec.solver and not orc.suppression_unconditional) else cfg.tol_closed
        for rec in rep.violations:
            lhs, rhs = checks.replay_violation(rep.check_id, rec, orc)
            out.append({"check_id": rep.check_id, "oracle": rep.oracle, "index": rec.get("index"),
                        "lhs": lhs, "rhs": rhs, "stored_lhs": rec["lhs"], "stored_rhs": rec["rhs"],
                        "violates": lhs > rhs + tol * max(1.0, abs(rhs))})
    return out
