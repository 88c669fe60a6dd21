"""Command engine: runs analyses on a document and renders deterministic reports."""

from __future__ import annotations

import json
import logging
import time
from typing import Any, Callable, Sequence

import yaml

from stratakit import __version__
from stratakit.algebra import Algebra, peirce_dimensions
from stratakit.dsl import build_algebra, build_module, render, with_field
from stratakit.errors import InvariantViolation, StratakitError, UsageError
from stratakit.fmod import (
    FModule,
    corner_of,
    dimension_vector,
    indecomposable_projectives,
    simple_at,
)
from stratakit.idempotents import class_representatives, gabriel_quiver
from stratakit.linalg import Matrix
from stratakit.metrics import ANALYSIS_LATENCY
from stratakit.models import AnalysisSection, InputDocument, OutputFormat, Report, RunOptions
from stratakit.radical import loewy_length, radical
from stratakit.resolution import (
    CertifiedInfinite,
    DimensionStatus,
    Finite,
    Resolution,
    ResolutionStatus,
    gl_dim,
    is_self_injective,
    minimal_resolution,
    status_to_dimension,
    verify_certificate,
    verify_resolution,
)
from stratakit.settings import Settings
from stratakit.settings import settings as default_settings
from stratakit.strata import (
    DirectedStratification,
    StratumDimReport,
    check_cover_theorem,
    check_restricted_resolution,
    check_restriction_preserves_projectives,
    contravariant_finiteness_obstruction,
    find_stratifications,
    findim_bound,
    finest_stratification,
    gldim_bound,
    ideals,
    is_minimal,
    layer_stratifying_reports,
    recollement_condition_check,
    simples_support_check,
    standardly_stratified_check,
    stratification_from_groups,
    support_profile,
)

logger = logging.getLogger(__name__)

COMMANDS = ("info", "stratify", "resolve", "gldim", "findim-bound", "verify")
VERIFY_KINDS = ("cover", "restriction", "stratifying", "standard", "recollement", "obstruction")


def _dimension(d: DimensionStatus) -> dict[str, Any]:
    out = d.to_json()
    if d.evidence:
        out["evidence"] = d.evidence
    return out


def _status(res: Resolution) -> dict[str, Any]:
    status: ResolutionStatus = res.status
    if isinstance(status, Finite):
        return {"kind": "finite", "length": status.length}
    if isinstance(status, CertifiedInfinite):
        cert = status.certificate
        field_ = res.module.algebra.field
        return {
            "kind": "certified_infinite",
            "first": status.first,
            "second": status.second,
            "certificate": {
                "kind": cert.kind,
                "statement": cert.describe(),
                "forward": Matrix(field_, cert.forward.matrix).to_lists(),
                "backward": Matrix(field_, cert.backward.matrix).to_lists(),
                "verified": verify_certificate(res),
            },
        }
    return {"kind": "cutoff", "depth": status.depth}


def _stratum_report(report: StratumDimReport) -> dict[str, Any]:
    out: dict[str, Any] = {
        "kind": report.kind,
        "bound": report.bound,
        "known": report.known,
        "strata": [
            {"object": e.label, "corner_dim": e.corner_dim, "value": _dimension(e.value), "source": e.source}
            for e in report.strata
        ],
        "unknown_due_to": list(report.unknown_due_to),
    }
    if report.algebra_value is not None:
        out["algebra_value"] = _dimension(report.algebra_value)
        out["inequality_holds"] = report.inequality_holds
    if report.interpretation:
        out["interpretation"] = report.interpretation
    return out


def _degrees(values: Sequence[tuple[int, Any]]) -> list[dict[str, Any]]:
    return [{"degree": n, "dim": d} for n, d in values]


def split_command(line: str) -> tuple[str, list[str]]:
    parts = line.split()
    if not parts:
        raise UsageError("empty command")
    return parts[0], parts[1:]


class AnalysisEngine:
    """One document, one algebra, many commands; results are cached on the algebra."""

    def __init__(
        self,
        document: InputDocument,
        options: RunOptions | None = None,
        engine_settings: Settings | None = None,
    ):
        base = engine_settings or default_settings
        self.options = options or RunOptions()
        overrides = {
            key: value
            for key, value in (
                ("cutoff", self.options.cutoff),
                ("tor_depth", self.options.tor_depth),
                ("seed", self.options.seed),
            )
            if value is not None
        }
        self.settings = base.model_copy(update=overrides)
        self.document = with_field(document, self.options.field)
        self._algebra: Algebra | None = None
        self._modules: dict[str, FModule] = {}
        self._stratification: DirectedStratification | None = None
        self._handlers: dict[str, Callable[[list[str]], dict[str, Any]]] = {
            "info": self.info,
            "stratify": self.stratify,
            "resolve": self.resolve,
            "gldim": self.gldim,
            "findim-bound": self.findim_bound,
            "verify": self.verify,
        }

    @property
    def algebra(self) -> Algebra:
        if self._algebra is None:
            self._algebra = build_algebra(self.document, name="A", config=self.settings)
        return self._algebra

    @property
    def stratification(self) -> DirectedStratification:
        if self._stratification is None:
            text = self.options.stratification
            if text:
                groups = [[v.strip() for v in group.split(",") if v.strip()] for group in text.split("|")]
                self._stratification = stratification_from_groups(self.algebra, groups)
            else:
                self._stratification = finest_stratification(self.algebra)
        return self._stratification

    def module(self, ref: str) -> FModule:
        a = self.algebra
        kind, _, label = ref.partition(":")
        if kind == "simple" and label:
            try:
                return simple_at(a, label)
            except KeyError:
                raise UsageError(f"no simple module at {label!r}") from None
        if kind == "projective" and label:
            for rep, projective in zip(class_representatives(a), indecomposable_projectives(a)):
                if label in (rep.label, rep.vertex):
                    return projective
            raise UsageError(f"no projective module at {label!r}")
        if ref not in self._modules:
            if self.document.module(ref) is None:
                raise UsageError(f"unknown module {ref!r}; use a module name, simple:<v> or projective:<v>")
            self._modules[ref] = build_module(self.document, a, ref)
        return self._modules[ref]

    def _vertex_sum(self, text: str):
        a = self.algebra
        labels = [v.strip() for v in text.split(",") if v.strip()]
        unknown = [v for v in labels if v not in a.vertex_labels]
        if unknown or not labels:
            raise UsageError(f"expected vertex labels from {', '.join(a.vertex_labels)}, got {text!r}")
        return a.field.normalize(sum((a.vertex(v) for v in labels), a.zero()))

    # -- commands ----------------------------------------------------------

    def run(self, command: str, arguments: Sequence[str] = ()) -> AnalysisSection:
        arguments = list(arguments)
        handler = self._handlers.get(command)
        if handler is None:
            raise UsageError(f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}")
        started = time.perf_counter()
        section = AnalysisSection(command=command, arguments=arguments)
        try:
            section.result = handler(arguments)
            status = "ok"
        except InvariantViolation:
            raise
        except StratakitError as exc:
            section.error = f"{type(exc).__name__}: {exc}"
            status = "error"
        ANALYSIS_LATENCY.labels(command=command).observe(time.perf_counter() - started)
        logger.info(
            "command_finished",
            extra={"command": " ".join([command, *arguments]), "field": self.document.field, "status": status},
        )
        return section

    def run_all(self, lines: Sequence[str]) -> list[AnalysisSection]:
        return [self.run(*split_command(line)) for line in lines]

    def report(self, sections: Sequence[AnalysisSection]) -> Report:
        return Report(input=render(self.document), analyses=list(sections), version=__version__, seed=self.settings.seed)

    def info(self, arguments: list[str]) -> dict[str, Any]:
        a = self.algebra
        gq = gabriel_quiver(a).quiver
        return {
            "algebra": {
                "field": a.field.name,
                "dim": a.dim,
                "vertices": list(a.vertex_labels),
                "basis": list(a.basis),
            },
            "radical": {"dim": radical(a).dim, "loewy_length": loewy_length(a)},
            "peirce": peirce_dimensions(a, list(a.vertex_idempotents)),
            "gabriel_quiver": {
                "vertices": list(gq.vertices),
                "arrows": [f"{arrow.label}: {arrow.source} -> {arrow.target}" for arrow in gq.arrows],
            },
            "self_injective": is_self_injective(a),
            "minimal": is_minimal(a),
        }

    def stratify(self, arguments: list[str]) -> dict[str, Any]:
        a = self.algebra
        found = []
        for s in find_stratifications(a):
            found.append(
                {
                    "objects": list(s.labels),
                    "length": s.length,
                    "corner_dims": [corner_of(a, e, label).algebra.dim for label, e in zip(s.labels, s.idempotents)],
                    "simples_supported": simples_support_check(s).passed,
                }
            )
        return {"minimal": is_minimal(a), "count": len(found), "stratifications": found}

    def resolve(self, arguments: list[str]) -> dict[str, Any]:
        if len(arguments) != 1:
            raise UsageError("resolve takes one module reference")
        m = self.module(arguments[0])
        res = minimal_resolution(m, config=self.settings)
        evidence = verify_resolution(res)
        return {
            "module": m.name,
            "dim": m.dim,
            "vertices": list(m.algebra.vertex_labels),
            "dimension_vector": list(dimension_vector(m).values),
            "terms": [
                {"index": k, "summands": labels, "dimension_vector": list(dimension_vector(term).values)}
                for k, (labels, term) in enumerate(zip(res.term_labels(), res.terms))
            ],
            "status": _status(res),
            "proj_dim": _dimension(status_to_dimension(res.status)),
            "verified": evidence.ok,
            "failures": list(evidence.failures),
        }

    def gldim(self, arguments: list[str]) -> dict[str, Any]:
        whole = gl_dim(self.algebra, config=self.settings)
        bound = gldim_bound(self.algebra, self.stratification, config=self.settings)
        return {
            "gldim": whole.to_json(),
            "evidence": whole.evidence,
            "stratification": list(self.stratification.labels),
            "bound": _stratum_report(bound),
        }

    def findim_bound(self, arguments: list[str]) -> dict[str, Any]:
        s = self.stratification
        oracle = {entry.obj: entry.value for entry in self.options.oracle}
        try:
            report = findim_bound(self.algebra, s, oracle, config=self.settings)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
        return {"stratification": list(s.labels), **_stratum_report(report)}

    def verify(self, arguments: list[str]) -> dict[str, Any]:
        if not arguments or arguments[0] not in VERIFY_KINDS:
            raise UsageError(f"verify needs one of {', '.join(VERIFY_KINDS)}")
        kind, rest = arguments[0], arguments[1:]
        return getattr(self, f"_verify_{kind}")(rest)

    def _verify_cover(self, rest: list[str]) -> dict[str, Any]:
        if len(rest) != 1:
            raise UsageError("verify cover takes one module reference")
        m, s = self.module(rest[0]), self.stratification
        profile = support_profile(m, s)
        verdicts = [check_cover_theorem(m, s)]
        verdicts.extend(check_restricted_resolution(m, s, x, config=self.settings) for x in profile.minimal)
        return {
            "module": m.name,
            "stratification": list(s.labels),
            "support": dict(profile.dims),
            "minimal_objects": list(profile.minimal),
            "closure": list(profile.closure),
            "verdicts": [v.to_json() for v in verdicts],
            "passed": all(v.passed for v in verdicts),
        }

    def _verify_restriction(self, rest: list[str]) -> dict[str, Any]:
        s = self.stratification
        chosen = [tuple(x for x in rest[0].split(";") if x)] if rest else ideals(s)
        verdicts = []
        for objs in chosen:
            verdict = check_restriction_preserves_projectives(s, objs)
            verdicts.append({"objects": list(objs), **verdict.to_json()})
        return {
            "stratification": list(s.labels),
            "ideals": verdicts,
            "passed": all(v["passed"] for v in verdicts),
        }

    def _verify_stratifying(self, rest: list[str]) -> dict[str, Any]:
        s = self.stratification
        layers = []
        for objs, report in layer_stratifying_reports(s, self.settings.tor_depth, config=self.settings):
            layers.append(
                {
                    "objects": list(objs),
                    "idempotent": report.complement,
                    "ideal_dim": report.ideal_dim,
                    "tensor_dim": report.tensor_dim,
                    "multiplication_iso": report.multiplication_iso,
                    "tor": _degrees(report.tor),
                    "tor_vanishes": report.tor_vanishes,
                    "passed": report.passed,
                }
            )
        return {
            "stratification": list(s.labels),
            "tor_depth": self.settings.tor_depth,
            "layers": layers,
            "passed": all(layer["passed"] for layer in layers),
        }

    def _verify_standard(self, rest: list[str]) -> dict[str, Any]:
        s = self.stratification
        report = standardly_stratified_check(self.algebra, s)
        out: dict[str, Any] = {
            "stratification": list(s.labels),
            "layers": [
                {"index": v.index, "generators": list(v.generators), "dim": v.dim, "projective": v.projective}
                for v in report.layers
            ],
            "passed": report.passed,
        }
        if report.webb is not None:
            out["webb"] = {
                "field": report.webb.field,
                "entries": [
                    {
                        "morphism": e.morphism,
                        "source": e.source,
                        "target": e.target,
                        "stabilizer_order": e.stabilizer_order,
                        "invertible": e.invertible,
                    }
                    for e in report.webb.entries
                ],
                "passed": report.webb.passed,
            }
        return out

    def _verify_recollement(self, rest: list[str]) -> dict[str, Any]:
        if len(rest) != 1:
            raise UsageError("verify recollement takes a comma-separated vertex list for e")
        report = recollement_condition_check(self.algebra, self._vertex_sum(rest[0]), config=self.settings)
        return {
            "idempotent": report.idempotent,
            "quotient_dim": report.quotient_dim,
            "left_proj_dim": _dimension(report.left_proj_dim),
            "right_proj_dim": _dimension(report.right_proj_dim),
            "summands": [
                {"vertex": s.vertex, "dim": s.dim, "proj_dim": _dimension(s.proj_dim)} for s in report.summands
            ],
            "ext": _degrees(report.ext),
            "failing": list(report.failing),
            "passed": report.passed,
        }

    def _verify_obstruction(self, rest: list[str]) -> dict[str, Any]:
        if len(rest) != 2:
            raise UsageError("verify obstruction takes an arrow p and a path q such as eps2*eps1")
        verdict = contravariant_finiteness_obstruction(
            self.algebra, rest[0], rest[1].split("*"), config=self.settings
        )
        return {
            "p": verdict.p,
            "q": verdict.q,
            "rad_kills_p": verdict.rad_kills_p,
            "q_kills_rad": verdict.q_kills_rad,
            "q_proj_dim": _dimension(verdict.q_proj_dim),
            "top_proj_dim": _dimension(verdict.top_proj_dim),
            "q_matches_target": verdict.q_matches_target,
            "q_nonzero": verdict.q_nonzero,
            "present": verdict.present,
        }


def emit(report: Report, output_format: OutputFormat | str = OutputFormat.TEXT) -> bytes:
    """Serialise a report; identical reports give identical bytes."""
    payload = report.model_dump(mode="json")
    if OutputFormat(output_format) is OutputFormat.JSON:
        return (json.dumps(payload, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    lines = [f"stratakit {report.version} (seed {report.seed})", "", "input:"]
    lines.extend(f"  {line}" for line in report.input.splitlines())
    for section in payload["analyses"]:
        title = " ".join([section["command"], *section["arguments"]])
        lines.extend(["", f"== {title} =="])
        if section["error"]:
            lines.append(f"error: {section['error']}")
            continue
        body = yaml.safe_dump(section["result"], sort_keys=False, default_flow_style=None, allow_unicode=True, width=100)
        lines.extend(body.rstrip("\n").splitlines())
    return ("\n".join(lines) + "\n").encode("utf-8")
