"""
Command-line front end: parse a program (file or -c string), execute its
declarations and commands in order, and emit a text or JSON report.

Exit codes: 0 all verification commands passed, 1 a verification failed,
2 usage or parse error.  JSON output is deterministic: identical inputs
give byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import dsl
from .degroup import Basis, degroupoidify_span
from .exactnum import rat_str
from .flags import flag_complex
from .groups import EquivariantMap, GSet, group_closure
from .groupoids import action_groupoid
from .hecke import (HeckeContext, verify_hecke_relations, verify_main_claim,
                    zamolodchikov_check)
from .presheaves import presheaf_roundtrip, span_roundtrip
from .spans import (GSetSpan, compose_gset_spans, gset_span_to_groupoid_span,
                    identity_span, span_iso, span_iso_obstruction)


class RunOptions:
    def __init__(self, cap=10 ** 6, max_flags=100000, seed=0, figures=None):
        self.cap = cap
        self.max_flags = max_flags
        self.seed = seed
        self.figures = figures


class CommandFailure(Exception):
    "A command could not run (not a verification verdict)."


def _matrix_json(m, row_labels=None, col_labels=None):
    out = {"rows": m.rows, "cols": m.cols,
           "entries": [[rat_str(m[i, j]) for j in range(m.cols)]
                       for i in range(m.rows)]}
    if row_labels is not None:
        out["row_labels"] = [str(l) for l in row_labels]
    if col_labels is not None:
        out["col_labels"] = [str(l) for l in col_labels]
    return out


class Runner:
    def __init__(self, program: dsl.Program, options: RunOptions):
        self.program = program
        self.options = options
        self.groups = {}
        self.gsets = {}
        self.maps = {}
        self.spans = {}
        self.reports = []
        self._flag_cache = {}

    def flag_context(self, rank, q) -> HeckeContext:
        key = (rank + 1, q)
        if key not in self._flag_cache:
            fc = flag_complex(rank + 1, q, max_flags=self.options.max_flags)
            self._flag_cache[key] = HeckeContext(fc)
        return self._flag_cache[key]

    def run(self):
        for st in self.program.statements:
            handler = getattr(self, "exec_" + type(st).__name__)
            try:
                handler(st)
            except CommandFailure:
                raise
            except Exception as e:
                raise CommandFailure(
                    "statement %r failed: %s" % (st.pretty(), e)) from e
        return self.reports

    def report(self, st, kind, ok, verification, **payload):
        entry = {"command": st.pretty(), "kind": kind, "ok": ok,
                 "verification": verification}
        entry.update(payload)
        self.reports.append(entry)

    # -- declarations -----------------------------------------------------

    def exec_GroupDecl(self, st):
        self.groups[st.name] = group_closure(st.gens, cap=self.options.cap)

    def exec_GSetDecl(self, st):
        group = self.groups[st.group]
        rows = [None] * len(group.generators)
        for g, images in st.mappings:
            padded = tuple(g) + tuple(range(len(g), group.degree))
            rows[group.generators.index(padded)] = images
        gset = GSet(group, st.size, rows)
        rng = random.Random(self.options.seed)
        gset.check_random_words(rng)
        self.gsets[st.name] = gset

    def exec_MapDecl(self, st):
        self.maps[st.name] = EquivariantMap(
            self.gsets[st.source], self.gsets[st.target], st.images)

    def exec_SpanDecl(self, st):
        left = self.maps[st.left]
        right = self.maps[st.right]
        self.spans[st.name] = GSetSpan(left.source, left, right)

    # -- commands ----------------------------------------------------------

    def exec_CheckCardinality(self, st):
        gset = self.gsets[st.gset]
        grpd = action_groupoid(gset)
        value = grpd.cardinality()
        self.report(st, "cardinality", True, False,
                    value=rat_str(value),
                    objects=gset.size, group_order=gset.group.order)

    def exec_DegroupSpan(self, st):
        span = self.spans[st.span_name]
        gspan = gset_span_to_groupoid_span(span)
        m = degroupoidify_span(gspan)
        rows = Basis(gspan.target_foot).labels()
        cols = Basis(gspan.source_foot).labels()
        self.report(st, "degroup", True, False,
                    matrix=_matrix_json(m, rows, cols))
        if self.options.figures:
            from .viz import render_matrix
            import os
            os.makedirs(self.options.figures, exist_ok=True)
            render_matrix(m, "%s/degroup_%s.png"
                          % (self.options.figures, st.span_name),
                          "degroupoidification of %s" % st.span_name)

    def exec_Compose(self, st):
        outer = self.spans[st.outer]
        inner = self.spans[st.inner]
        c = compose_gset_spans(outer, inner)
        self.report(st, "compose", True, False,
                    apex_size=c.apex.size, path_arity=c.path_arity,
                    fiber_matrix=_matrix_json(c.fiber_matrix()))
        if self.options.figures:
            from .viz import render_matrix
            import os
            os.makedirs(self.options.figures, exist_ok=True)
            render_matrix(c.fiber_matrix(),
                          "%s/compose_%s_%s.png"
                          % (self.options.figures, st.outer, st.inner),
                          "fiber matrix of %s o %s" % (st.outer, st.inner))

    def exec_Iso(self, st):
        a = self.spans[st.first]
        b = self.spans[st.second]
        witness = span_iso(a, b)
        payload = {}
        if witness is None:
            payload["obstruction"] = span_iso_obstruction(a, b)
        else:
            payload["witness_size"] = len(witness.images)
        self.report(st, "iso", witness is not None, True, **payload)

    def exec_HeckeVerify(self, st):
        ctx = self.flag_context(st.rank, st.q)
        rep = verify_hecke_relations(st.rank + 1, st.q, fc=ctx.fc)
        self.report(st, "hecke", rep.ok, True, **rep.as_json())
        if self.options.figures:
            from .viz import render_hecke_figures
            render_hecke_figures(rep, ctx, self.options.figures)

    def exec_MainClaim(self, st):
        if st.rank is None:
            s3 = group_closure([(1, 0, 2), (1, 2, 0)])
            gsets = [GSet.one_point(s3), GSet.natural(s3), GSet.regular(s3)]
            label = "S3 family (point, natural, regular)"
            group = s3
        else:
            ctx = self.flag_context(st.rank, st.q)
            gsets = [ctx.fc.gset]
            group = ctx.fc.group
            label = "A%d flag complex, q=%d" % (st.rank, st.q)
        rep = verify_main_claim(group, gsets)
        self.report(st, "main-claim", rep.ok, True,
                    instance=label,
                    dims=[{"pair": [i, j], "dim": d, "nullspace_dim": nd,
                           "ok": ok}
                          for (i, j, d, nd, ok) in rep.dim_checks],
                    tensors=[{"triple": [i, j, k], "ok": ok}
                             for (i, j, k, ok) in rep.tensor_checks],
                    units=[{"pair": [i, j], "ok": ok}
                           for (i, j, ok) in rep.unit_checks])
        if self.options.figures:
            from .viz import render_main_claim_figures
            render_main_claim_figures(rep, self.options.figures)

    def exec_Zamolodchikov(self, st):
        rep = zamolodchikov_check(st.rank + 1, st.q)
        payload = rep.as_json()
        payload.pop("ok", None)
        self.report(st, "zamolodchikov", rep.ok, True, **payload)

    def exec_GrothendieckRoundtrip(self, st):
        if st.span_name is not None:
            span = self.spans[st.span_name]
            spans = [span]
            x, y = span.source_foot, span.target_foot
        else:
            rank, q = (st.rank, st.q) if st.rank is not None else (2, 2)
            ctx = self.flag_context(rank, q)
            x = y = ctx.fc.gset
            rng = random.Random(self.options.seed)
            from .randgen import random_span
            spans = [identity_span(x), ctx.sigma(1)]
            spans += [random_span(rng, x, y) for _ in range(3)]
        from .groups import product_gset
        base = action_groupoid(product_gset(x, y))
        ok = True
        trials = []
        for i, s in enumerate(spans):
            p, s2, witness = span_roundtrip(s, base)
            _, _, nat_ok = presheaf_roundtrip(p)
            good = witness.is_bijective and nat_ok
            trials.append({"trial": i, "apex_size": s.apex.size, "ok": good})
            ok = ok and good
        self.report(st, "grothendieck", ok, True, trials=trials)


def run_program(program: dsl.Program, options: RunOptions):
    runner = Runner(program, options)
    reports = runner.run()
    verifications = [r for r in reports if r["verification"]]
    ok = all(r["ok"] for r in verifications)
    return {"ok": ok, "reports": reports}


def format_text(result) -> str:
    lines = []
    for r in result["reports"]:
        status = "ok" if r["ok"] else "FAIL"
        if not r["verification"]:
            status = "done"
        lines.append("[%s] %s" % (status, r["command"]))
        if r["kind"] == "cardinality":
            lines.append("    cardinality = %s" % r["value"])
        elif r["kind"] == "degroup":
            m = r["matrix"]
            lines.append("    %dx%d matrix over Q" % (m["rows"], m["cols"]))
            for row in m["entries"]:
                lines.append("      " + " ".join(x.rjust(6) for x in row))
        elif r["kind"] == "compose":
            lines.append("    apex %d points, arity %d"
                         % (r["apex_size"], r["path_arity"]))
        elif r["kind"] == "iso" and not r["ok"]:
            lines.append("    no isomorphism: orbit types %s vs %s"
                         % (r["obstruction"]["left_orbit_types"],
                            r["obstruction"]["right_orbit_types"]))
        elif r["kind"] == "hecke":
            for rel in r["relations"]:
                lines.append("    %-45s matrix:%s span:%s"
                             % (rel["name"],
                                "ok" if rel["matrix_ok"] else "FAIL",
                                "ok" if rel["span_iso_ok"] else "none"))
        elif r["kind"] == "zamolodchikov":
            lines.append("    %d paths, source word %s"
                         % (r["path_count"],
                            "".join(map(str, r["source_word"]))))
    lines.append("result: %s" % ("pass" if result["ok"] else "FAIL"))
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="qspan",
        description="exact verification of groupoidified Hecke structure")
    ap.add_argument("file", nargs="?", help="program file to run")
    ap.add_argument("-c", "--command", help="program text given inline")
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    ap.add_argument("--out", help="write the report to a file")
    ap.add_argument("--cap", type=int, default=10 ** 6,
                    help="group enumeration cap")
    ap.add_argument("--max-flags", type=int, default=100000,
                    help="flag enumeration cap")
    ap.add_argument("--seed", type=int, default=0,
                    help="seed for randomized commands")
    ap.add_argument("--figures", help="directory for rendered figures")
    args = ap.parse_args(argv)

    if (args.file is None) == (args.command is None):
        ap.print_usage(sys.stderr)
        print("qspan: give exactly one of FILE or -c TEXT", file=sys.stderr)
        return 2
    if args.command is not None:
        text = args.command
    else:
        try:
            with open(args.file, "rb") as fh:
                text = fh.read()
        except OSError as e:
            print("qspan: cannot read %s: %s" % (args.file, e), file=sys.stderr)
            return 2

    try:
        program = dsl.parse(text)
    except dsl.ParseError as e:
        print("qspan: parse error: %s" % e, file=sys.stderr)
        return 2

    options = RunOptions(cap=args.cap, max_flags=args.max_flags,
                         seed=args.seed, figures=args.figures)
    try:
        result = run_program(program, options)
    except CommandFailure as e:
        print("qspan: %s" % e, file=sys.stderr)
        return 2

    if args.json:
        output = json.dumps(result, indent=2, sort_keys=True) + "\n"
    else:
        output = format_text(result)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(output)
    else:
        sys.stdout.write(output)
    return 0 if result["ok"] else 1


if __name__ == "__main__":
    sys.exit(main())
