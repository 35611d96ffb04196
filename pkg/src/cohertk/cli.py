"""Command-line interface for the coherence toolkit.

Usage
-----
::

    cohertk classify --state psi.json
    cohertk equiv --first psi.json --second phi.json [--method liu|slicc]
    cohertk feasible --source a.json --target b.json --class SIO [--cut 1]
    cohertk monotone --kind source --class IC --state psi.json
    cohertk volume --method mc --kind accessible --class SIO \
            --state r.json --samples 1000000 [--seed N]
    cohertk check --suite monotonicity --monotone sio-Ca --class SIO \
            --trials 10000
    cohertk plot --figure qutrit --state phi.json [--format svg|csv]
    cohertk counterexample [--step 0.05]

Input files are UTF-8 JSON: pure states ``{"dims": [...], "amps":
[[re, im], ...]}``, Bloch vectors ``{"bloch": [rx, ry, rz]}``, spectra
``{"spectrum": [...]}``, channels as documented in
:mod:`cohertk.serialize`.

Results go to the standard output stream (or ``--output``) as JSON,
CSV, or SVG with every float at 12 significant digits.  Runs are
reproducible: the random seed defaults to a fixed constant, overridden
by the ``COHERTK_SEED`` environment variable, overridden by ``--seed``.

Exit status
-----------
0   success
1   input error (bad flags, malformed files, unsupported combinations)
2   a closed-form criterion's precondition is unmet (the comparison is
    well-formed but this tool cannot decide it)
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys

import numpy as np

from .classify import (canonical_form_r4, liu_equivalent, slicc_class_2qubit,
                       slicc_equivalent_2qubit)
from .feasibility import (LemmaNotApplicableError, ic_pure_feasible,
                          licc_bipartite_feasible, locc_pure_feasible,
                          pio_qubit_feasible, sio_qubit_feasible)
from .monotones import (_select_spectrum, planar_example_volumes,
                        qubit_pio_Ca, qubit_pio_Cs, qubit_sio_Ca,
                        qubit_sio_Cs, source_coherence_closed)
from .oracle import (DEFAULT_SEED, b3_b4_counterexamples, exact_polytope_volume,
                     coordinate_plane_predicate, formula_identity_check,
                     lemma1_suite, make_region, mc_volume, monotonicity_suite,
                     qubit_region_predicate, sorted_simplex_predicate)
from .plotting import boundary_csv, figure_regions, svg_figure
from .serialize import dumps, load_json, subject_from_dict
from .states import (PureState, QubitBloch, bloch_from_density,
                     dephased_spectrum, sorted_spectrum)

_SEGMENT_SUP = math.sqrt(2.0) / 2.0


class _Parser(argparse.ArgumentParser):
    """argparse reserves exit status 2 for usage errors; this tool
    reserves 2 for undecided criteria, so usage errors exit 1."""

    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _resolve_seed(explicit):
    if explicit is not None:
        return int(explicit)
    env = os.environ.get("COHERTK_SEED")
    if env is not None and env != "":
        try:
            return int(env)
        except ValueError as exc:
            raise ValueError(f"COHERTK_SEED must be an integer: {env!r}") \
                from exc
    return DEFAULT_SEED


def _load_subject(path):
    return subject_from_dict(load_json(path))


def _as_bloch(subject) -> QubitBloch:
    if isinstance(subject, QubitBloch):
        return subject
    if isinstance(subject, PureState) and subject.dims == (2,):
        vec = subject.amps
        return bloch_from_density(np.outer(vec, vec.conj()))
    raise ValueError("this operation needs a Bloch vector "
                     '({"bloch": [rx, ry, rz]}) or single-qubit state')


def _as_spectrum(subject):
    if isinstance(subject, QubitBloch):
        raise ValueError("this operation needs a state or spectrum, "
                         "not a Bloch vector")
    if isinstance(subject, PureState):
        return dephased_spectrum(subject)
    return sorted_spectrum(subject)


def _emit(text: str, output):
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)


def _emit_json(payload, output):
    _emit(dumps(payload), output)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_classify(args):
    state = _load_subject(args.state)
    if not isinstance(state, PureState) or state.dims != (2, 2):
        raise ValueError("classify needs a two-qubit pure state")
    label = slicc_class_2qubit(state)
    payload = {
        "R": label.rank,
        "subclass": label.subclass,
        "support": list(label.support_pattern),
    }
    if label.rank == 4:
        payload["r"] = label.invariant_r
        form = canonical_form_r4(state)
        payload["canonical"] = {"alpha": form.alpha, "beta": form.beta,
                                "invariant": form.invariant}
    _emit_json(payload, args.output)
    return 0


def _cmd_equiv(args):
    first = _load_subject(args.first)
    second = _load_subject(args.second)
    if not isinstance(first, PureState) or not isinstance(second, PureState):
        raise ValueError("equiv compares two pure states")
    if args.method == "slicc":
        payload = {
            "method": "slicc",
            "equivalent": slicc_equivalent_2qubit(first, second),
            "first": dataclasses.asdict(slicc_class_2qubit(first)),
            "second": dataclasses.asdict(slicc_class_2qubit(second)),
        }
    else:
        witness = liu_equivalent(first, second)
        payload = {"method": "liu", "equivalent": witness is not None}
        if witness is not None:
            payload["witness"] = {
                "permutations": [list(p) for p in witness.permutations],
                "phases": [list(p) for p in witness.phases],
            }
    _emit_json(payload, args.output)
    return 0


def _cmd_feasible(args):
    source = _load_subject(args.source)
    target = _load_subject(args.target)
    cls = args.operation_class.upper()
    if cls in ("SIO", "PIO"):
        r, s = _as_bloch(source), _as_bloch(target)
        fn = pio_qubit_feasible if cls == "PIO" else sio_qubit_feasible
        verdict = fn(r, s)
    elif cls == "IC":
        if isinstance(source, PureState) and isinstance(target, PureState):
            verdict = ic_pure_feasible(source, target)
        else:
            # Qubit SIO and IC admit the same state transformations, so
            # Bloch-vector subjects reuse the SIO criterion.
            verdict = sio_qubit_feasible(_as_bloch(source), _as_bloch(target))
    elif cls == "LOCC":
        verdict = locc_pure_feasible(source, target, cut=args.cut)
    elif cls == "LICC":
        verdict = licc_bipartite_feasible(source, target)
    else:
        raise ValueError(f"unknown operation class {cls!r}")
    payload = {"class": cls, "feasible": verdict.feasible,
               "binding": list(verdict.binding)}
    _emit_json(payload, args.output)
    return 0


_QUBIT_CLOSED = {
    ("accessible", "SIO"): qubit_sio_Ca,
    ("accessible", "IC"): qubit_sio_Ca,
    ("source", "SIO"): qubit_sio_Cs,
    ("source", "IC"): qubit_sio_Cs,
    ("accessible", "PIO"): qubit_pio_Ca,
    ("source", "PIO"): qubit_pio_Cs,
}


def _qubit_closed(subject, kind, cls):
    try:
        fn = _QUBIT_CLOSED[(kind, cls)]
    except KeyError:
        raise ValueError(
            f"no closed qubit form for kind={kind!r} class={cls!r}") from None
    return dataclasses.asdict(fn(subject))


def _support_size(subject, cls, cut) -> int:
    if isinstance(subject, PureState):
        lam, _ = _select_spectrum(subject, cls, cut)
    else:
        lam = sorted_spectrum(subject)
    return int(np.sum(np.asarray(lam) > 1e-12))


def _planar_payload(subject, kind, cls, cut):
    va, vs, ca, cs = planar_example_volumes(subject, cls, cut=cut)
    volume, value = (va, ca) if kind == "accessible" else (vs, cs)
    if _support_size(subject, cls, cut) == 3:
        measure, sup = "coordinate-plane", 0.5
    else:
        measure, sup = "sorted-representative", _SEGMENT_SUP
    return {"kind": kind, "value": value, "volume": volume,
            "sup_volume": sup, "measure": measure, "operation_class": cls}


def _cmd_monotone(args):
    subject = _load_subject(args.state)
    kind = args.kind
    cls = args.operation_class.upper()
    if isinstance(subject, QubitBloch):
        payload = _qubit_closed(subject, kind, cls)
    elif kind == "source":
        payload = dataclasses.asdict(
            source_coherence_closed(subject, cls, cut=args.cut))
    else:
        # accessible coherence has closed forms only for the planar families
        payload = _planar_payload(subject, kind, cls, args.cut)
    _emit_json(payload, args.output)
    return 0


def _closed_volume(subject, kind, cls, cut, region):
    if isinstance(subject, QubitBloch):
        return _qubit_closed(subject, kind, cls)
    if region == "coordinate-plane" or kind == "accessible":
        return _planar_payload(subject, kind, cls, cut)
    return dataclasses.asdict(source_coherence_closed(subject, cls, cut=cut))


def _mc_volume_payload(subject, args, seed):
    cls = args.operation_class.upper()
    if isinstance(subject, QubitBloch):
        region_name = args.region or "bloch-disc"
        if region_name not in ("bloch-disc", "bloch-half-disc"):
            raise ValueError("Bloch subjects sample bloch-disc regions")
        region = make_region(region_name)
        predicate = qubit_region_predicate(subject, cls, args.kind)
    else:
        lam = _as_spectrum(subject)
        region_name = args.region or "simplex-sorted"
        if region_name == "simplex-sorted":
            region = make_region("simplex-sorted", dim=len(lam))
            predicate = sorted_simplex_predicate(lam, args.kind)
        elif region_name == "coordinate-plane":
            region = make_region("coordinate-plane")
            predicate = coordinate_plane_predicate(lam, args.kind)
        else:
            raise ValueError(
                f"region {region_name!r} does not apply to spectra")
    estimate = mc_volume(predicate, region, args.samples, seed)
    return {"method": "mc", "kind": args.kind, "class": cls,
            "region": region.name,
            "estimate": dataclasses.asdict(estimate)}


def _cmd_volume(args):
    subject = _load_subject(args.state)
    seed = _resolve_seed(args.seed)
    if args.method == "closed":
        payload = _closed_volume(subject, args.kind,
                                 args.operation_class.upper(), args.cut,
                                 args.region)
    elif args.method == "exact":
        lam = _as_spectrum(subject)
        payload = {"method": "exact", "volume": exact_polytope_volume(lam)}
    else:
        payload = _mc_volume_payload(subject, args, seed)
    _emit_json(payload, args.output)
    return 0


def _cmd_check(args):
    seed = _resolve_seed(args.seed)
    if args.suite == "monotonicity":
        if not args.monotone:
            raise ValueError("--monotone is required for this suite")
        report = monotonicity_suite(args.monotone,
                                    args.operation_class.upper(),
                                    args.trials, seed)
    elif args.suite == "lemma1":
        report = lemma1_suite(args.trials, seed)
    else:
        dims = tuple(int(d) for d in args.dims.split(","))
        report = formula_identity_check(args.count, dims, seed)
    _emit_json(dataclasses.asdict(report), args.output)
    return 0


def _cmd_counterexample(args):
    report = b3_b4_counterexamples(step=args.step)
    _emit_json(dataclasses.asdict(report), args.output)
    return 0


def _cmd_plot(args):
    subject = _load_subject(args.state)
    regions = figure_regions(args.figure, subject)
    if args.format == "csv":
        _emit(boundary_csv(regions), args.output)
        return 0
    metadata = {}
    if args.figure in ("qutrit", "two-level"):
        va, vs, ca, cs = planar_example_volumes(subject)
        metadata.update({"accessible_volume": va, "source_volume": vs,
                         "accessible_value": ca, "source_value": cs})
    else:
        r = _as_bloch(subject)
        ca_fn, cs_fn = ((qubit_sio_Ca, qubit_sio_Cs)
                        if args.figure == "qubit-sio"
                        else (qubit_pio_Ca, qubit_pio_Cs))
        metadata.update({"accessible_volume": ca_fn(r).volume,
                         "source_volume": cs_fn(r).volume,
                         "accessible_value": ca_fn(r).value,
                         "source_value": cs_fn(r).value})
    _emit(svg_figure(args.figure, regions, metadata), args.output)
    return 0


# ---------------------------------------------------------------------------
# argument wiring


def _build_parser() -> _Parser:
    parser = _Parser(prog="cohertk",
                     description="coherence resource-theory toolkit")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    def add_output(p):
        p.add_argument("--output", help="write to this file instead of the "
                                        "standard output stream")

    p = sub.add_parser("classify", help="two-qubit stochastic class")
    p.add_argument("--state", required=True)
    add_output(p)
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("equiv", help="local-incoherent-unitary or "
                                     "stochastic equivalence")
    p.add_argument("--first", required=True)
    p.add_argument("--second", required=True)
    p.add_argument("--method", choices=("liu", "slicc"), default="liu")
    add_output(p)
    p.set_defaults(fn=_cmd_equiv)

    p = sub.add_parser("feasible", help="transformation feasibility")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--class", dest="operation_class", required=True,
                   help="IC | SIO | PIO | LICC | LOCC")
    p.add_argument("--cut", type=int, default=None,
                   help="bipartition size for LOCC (first k parties)")
    add_output(p)
    p.set_defaults(fn=_cmd_feasible)

    p = sub.add_parser("monotone", help="closed-form coherence monotones")
    p.add_argument("--kind", choices=("accessible", "source"), required=True)
    p.add_argument("--class", dest="operation_class", default="IC")
    p.add_argument("--state", required=True)
    p.add_argument("--cut", type=int, default=None)
    add_output(p)
    p.set_defaults(fn=_cmd_monotone)

    p = sub.add_parser("volume", help="accessible/source volumes")
    p.add_argument("--method", choices=("closed", "exact", "mc"),
                   default="closed")
    p.add_argument("--kind", choices=("accessible", "source"),
                   default="source")
    p.add_argument("--class", dest="operation_class", default="IC")
    p.add_argument("--state", required=True)
    p.add_argument("--cut", type=int, default=None)
    p.add_argument("--region", default=None,
                   help="simplex-sorted | coordinate-plane | bloch-disc | "
                        "bloch-half-disc")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=None)
    add_output(p)
    p.set_defaults(fn=_cmd_volume)

    p = sub.add_parser("check", help="property suites and formula identity")
    p.add_argument("--suite", choices=("monotonicity", "lemma1", "identity"),
                   required=True)
    p.add_argument("--monotone", default=None,
                   help="sio-Ca | sio-Cs | pio-Ca | pio-Cs | source-closed")
    p.add_argument("--class", dest="operation_class", default="IC")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--count", type=int, default=100,
                   help="spectra per dimension (identity suite)")
    p.add_argument("--dims", default="2,3,4")
    p.add_argument("--seed", type=int, default=None)
    add_output(p)
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("plot", help="region geometry as SVG or CSV")
    p.add_argument("--figure", required=True,
                   choices=("qubit-sio", "qubit-pio", "qutrit", "two-level"))
    p.add_argument("--state", required=True)
    p.add_argument("--format", choices=("svg", "csv"), default="svg")
    add_output(p)
    p.set_defaults(fn=_cmd_plot)

    p = sub.add_parser("counterexample",
                       help="averaging/convexity failure certificates")
    p.add_argument("--step", type=float, default=0.05)
    add_output(p)
    p.set_defaults(fn=_cmd_counterexample)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except LemmaNotApplicableError as exc:
        _emit_json({"applicable": False, "reason": str(exc)}, None)
        return 2
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"cohertk: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
