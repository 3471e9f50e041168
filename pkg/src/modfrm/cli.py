"""Command-line front end (``modfrm``).

Exit status is 0 on success, 2 for invalid input (bad arguments, specs,
allocations or files) and 3 when a numerical design step fails.  Errors are
reported on stderr as a one-line JSON object.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys

import numpy as np

from . import __version__
from .bank import build_uniform_bank, channel_count_formula, merge_channels
from .channelizer import channelize, iq_bytes, read_iq, tone, tone_report
from .cost import total_cost
from .designfile import atomic_write_bytes, atomic_write_text, read_design, write_design
from .errors import AllocationError, DesignError, ModFrmError, SpecError
from .firdesign import TWO_PI, FilterSpec, uniform_response
from .frmcore import Case, ModalConfig, compose_modfrm, design_modal, masking_edges
from .ifir import optimize_lifir, optimize_shared_lifir
from .presets import PRESETS, get_preset

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3
DB_FLOOR = -120.0

_FREQ = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)?\s*\*?\s*(pi|π)?\s*$")


def parse_freq(text):
    """Frequency in rad/sample from ``"0.2pi"``, ``"pi"`` or plain radians."""
    m = _FREQ.match(str(text))
    if not m or (m.group(1) is None and m.group(2) is None):
        raise argparse.ArgumentTypeError(f"invalid frequency {text!r}; use e.g. 0.2pi or 0.628")
    value = float(m.group(1)) if m.group(1) is not None else 1.0
    return value * math.pi if m.group(2) else value


def parse_counts(text):
    try:
        counts = [int(t) for t in re.split(r"[,\s]+", text.strip("()[] ")) if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid allocation {text!r}; use e.g. 2,1,3,2") from None
    if not counts:
        raise argparse.ArgumentTypeError("allocation is empty")
    return counts


def parse_tones(text):
    """``"0.25pi,0.5pi@0.3"`` -> [(freq, amplitude), ...]."""
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        f, _, a = item.partition("@")
        out.append((parse_freq(f), float(a) if a else 1.0))
    if not out:
        raise argparse.ArgumentTypeError("no tones given")
    return out


def fmt(x):
    return format(float(x), ".17g")


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(text, output):
    if output and output != "-":
        atomic_write_text(output, text)
    else:
        sys.stdout.write(text)


def _spec_config(args, L):
    spec = FilterSpec(args.theta, args.phi, args.ripple, args.atten)
    if args.m is None:
        return spec, ModalConfig.from_edges(args.theta, args.phi, L, args.case)
    return spec, ModalConfig(args.theta, args.phi, args.m, L, args.case)


# ---------------------------------------------------------------------------
# commands


def _design_pipeline(args, config, spec, modal=None):
    if modal is None:
        modal = design_modal(spec, config, atten_margin_db=args.modal_margin)
    sa, sc = masking_edges(config).specs(spec.passband_ripple_db, spec.stopband_atten_db)
    if args.shared_lifir:
        hma, hmc = optimize_shared_lifir((sa, sc), args.search_max)
    else:
        hma, hmc = optimize_lifir(sa, args.search_max), optimize_lifir(sc, args.search_max)
    return compose_modfrm(config, modal, hma, hmc, spec=spec)


def cmd_design(args):
    spec, config = _spec_config(args, args.L)
    M = channel_count_formula(config.m, config.L, config.case)
    design = _design_pipeline(args, config, spec)
    bank = build_uniform_bank(design)
    report = total_cost(design)
    write_design(args.output, design, allocation=args.allocation,
                 command=" ".join(sys.argv) if args.argv is None else " ".join(args.argv))
    ws = design.overall_spec
    summary = {
        "output": args.output,
        "channels": M,
        "cmax": bank.cmax,
        "exceeds_cmax": bank.exceeds_cmax,
        "modal_length": design.modal.length,
        "l_ifir": [design.hma.l_ifir, design.hmc.l_ifir],
        "overall_passband_pi": ws.passband_edge / np.pi,
        "overall_stopband_pi": ws.stopband_edge / np.pi,
        "cost": report.as_dict(),
    }
    print(f"cost {report}")
    print(json.dumps(summary, indent=1))
    return EXIT_OK


SWEEP_HEADER = [
    "L", "channels", "ma_pass_pi", "ma_stop_pi", "mc_pass_pi", "mc_stop_pi", "l_ifir",
    "overall_pass_pi", "overall_stop_pi", "transition_pi", "edge_shift_pi",
    "m_modal", "m_ma_pr", "m_ma_is", "m_mc_pr", "m_mc_is", "total", "error",
]


def sweep_rows(args):
    modal_cache = {}
    for L in args.L:
        try:
            spec, config = _spec_config(args, L)
            M = channel_count_formula(config.m, config.L, config.case)
            e = masking_edges(config)
            key = (config.theta, config.phi, config.m)
            if key not in modal_cache:
                modal_cache[key] = design_modal(spec, config, atten_margin_db=args.modal_margin)
            design = _design_pipeline(args, config, spec, modal=modal_cache[key])
            c = total_cost(design)
            la, lc = design.hma.l_ifir, design.hmc.l_ifir
            wp, ws = config.nominal_overall_edges()
            yield [L, M, *(fmt(v / np.pi) for v in e.as_tuple()),
                   str(la) if la == lc else f"{la}/{lc}",
                   fmt(wp / np.pi), fmt(ws / np.pi), fmt((ws - wp) / np.pi),
                   fmt(design.edge_offset / L / np.pi), *c.parts(), c.total, ""]
        except ModFrmError as exc:
            yield [L] + [""] * (len(SWEEP_HEADER) - 2) + [f"{type(exc).__name__}: {exc}"]


def cmd_sweep(args):
    rows = list(sweep_rows(args))
    _emit(_csv_text(SWEEP_HEADER, rows), args.output)
    return EXIT_OK


def response_table(channels, grid_size):
    """``(omega, dB per channel)`` rows on ``2*pi*k/grid_size``."""
    if grid_size < 1:
        raise SpecError("grid_size must be positive")
    w = TWO_PI * np.arange(grid_size) / grid_size
    cols = [w]
    for h in channels:
        mag = np.abs(uniform_response(h, grid_size))
        cols.append(np.maximum(20.0 * np.log10(np.maximum(mag, 1e-300)), DB_FLOOR))
    return np.column_stack(cols)


def cmd_respond(args):
    if args.grid_size < 1:
        raise SpecError("--grid-size must be a positive integer")
    loaded = read_design(args.design)
    bank = build_uniform_bank(loaded.design)
    table = response_table(bank.channels, args.grid_size)
    header = ["omega"] + [f"ch{k}_db" for k in range(bank.channel_count)]
    _emit(_csv_text(header, ([fmt(v) for v in row] for row in table)), args.output)
    return EXIT_OK


def _allocation_for(args, loaded, M):
    if args.preset:
        preset = get_preset(args.preset)
        if preset.uniform_channels != M:
            raise AllocationError(
                f"preset {preset.name} needs a {preset.uniform_channels}-channel bank; design has {M}")
        return list(preset.allocation)
    if args.allocation:
        return args.allocation
    if loaded.allocation:
        return list(loaded.allocation)
    return [1] * M


def cmd_channelize(args):
    loaded = read_design(args.design)
    bank = build_uniform_bank(loaded.design)
    counts = _allocation_for(args, loaded, bank.channel_count)
    merged = merge_channels(bank, counts)
    if args.input:
        x = read_iq(args.input)
        tones = []
    else:
        tones = args.tones or []
        n = args.samples
        x = np.zeros(n, dtype=complex)
        for f, a in tones:
            x += tone(f, n, a)
    outputs = channelize(merged.channels, x)
    os.makedirs(args.output, exist_ok=True)
    chans = []
    for i, y in enumerate(outputs):
        path = os.path.join(args.output, f"channel_{i}.iq")
        atomic_write_bytes(path, iq_bytes(y))
        p = float(np.mean(np.abs(y) ** 2)) if y.size else 0.0
        chans.append({"index": i, "count": merged.allocation.counts[i],
                      "start": merged.allocation.start_channels[i],
                      "output": path,
                      "power_db": 10 * math.log10(p) if p > 0 else None})
    report = {
        "uniform_channels": bank.channel_count,
        "allocation": list(merged.allocation.counts),
        "signs": list(merged.allocation.signs),
        "samples": int(x.size),
        "channels": chans,
        "tones": [tone_report(merged, f, args.report_samples).as_dict() for f, _ in tones],
    }
    text = json.dumps(report, indent=1)
    atomic_write_text(os.path.join(args.output, "report.json"), text + "\n")
    print(text)
    return EXIT_OK


def cmd_cost(args):
    loaded = read_design(args.design)
    c = total_cost(loaded.design)
    if args.json:
        print(json.dumps(c.as_dict()))
    else:
        print(f"{c}")
    return EXIT_OK


def cmd_presets(args):
    rows = []
    for p in PRESETS.values():
        rows.append([p.name, p.uniform_channels, p.m, p.L, f"{p.theta / np.pi:.6g}", f"{p.phi / np.pi:.6g}",
                     ",".join(map(str, p.allocation)), "; ".join(p.standards)])
    header = ["name", "uniform_channels", "m", "L", "theta_pi", "phi_pi", "allocation", "standards"]
    sys.stdout.write(_csv_text(header, rows))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _add_design_args(p, single_L=True):
    p.add_argument("--theta", type=parse_freq, required=True, help="modal passband edge, e.g. 0.2pi")
    p.add_argument("--phi", type=parse_freq, required=True, help="modal stopband edge, e.g. 0.3pi")
    p.add_argument("--ripple", type=float, default=0.0065, help="passband ripple in dB (default 0.0065)")
    p.add_argument("--atten", type=float, default=60.0, help="stopband attenuation in dB (default 60)")
    p.add_argument("--m", type=int, default=None,
                   help="odd number of modulated copies minus one; inferred from theta+phi if omitted")
    if single_L:
        p.add_argument("--L", type=int, required=True, help="interpolation factor")
    else:
        p.add_argument("--L", type=int, nargs="*", default=[], help="interpolation factors")
    p.add_argument("--case", type=Case.parse, default=Case.I, help="masking case I or II")
    p.add_argument("--modal-margin", type=float, default=None,
                   help="extra modal attenuation in dB (default 20*log10((m+1)/2+1))")
    p.add_argument("--search-max", type=int, default=16, help="largest IFIR factor tried")
    p.add_argument("--shared-lifir", action="store_true",
                   help="use one IFIR factor for both masking filters")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="modfrm",
        description="Design modulated FRM filter banks and channelizers.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="design a uniform bank and write a design file")
    _add_design_args(p)
    p.add_argument("--allocation", type=parse_counts, default=None,
                   help="optional channel allocation stored in the file, e.g. 2,1,3,2")
    p.add_argument("-o", "--output", required=True, help="design file (JSON)")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("sweep", help="cost/edge table over several interpolation factors (CSV)")
    _add_design_args(p, single_L=False)
    p.add_argument("-o", "--output", default="-", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("respond", help="per-channel magnitude (dB) over [0, 2pi) as CSV")
    p.add_argument("design", help="design file")
    p.add_argument("--grid-size", type=int, default=4096)
    p.add_argument("-o", "--output", default="-", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_respond)

    p = sub.add_parser(
        "channelize",
        help="filter a signal through the merged bank",
        description=(
            "Filter complex baseband samples through the merged channels. "
            "Raw input (--input) is interleaved I/Q as 32-bit little-endian floats "
            "(I0 Q0 I1 Q1 ...); outputs channel_<i>.iq use the same format. "
            "With --tones a synthetic sum of complex exponentials is used and the "
            "report lists each tone's gain in every merged channel."
        ),
    )
    p.add_argument("design", help="design file")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--allocation", type=parse_counts, help="channel counts, e.g. 2,1,3,2")
    g.add_argument("--preset", help="preset name (see 'presets list')")
    s = p.add_mutually_exclusive_group(required=True)
    s.add_argument("--tones", type=parse_tones, help="comma list of freq[@amplitude], e.g. 0.25pi,0.6pi@0.5")
    s.add_argument("--input", help="raw interleaved float32 I/Q file")
    p.add_argument("--samples", type=int, default=8192, help="synthetic signal length")
    p.add_argument("--report-samples", type=int, default=None,
                   help="signal length for the per-tone gain measurement")
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.set_defaults(func=cmd_channelize)

    p = sub.add_parser("cost", help="multiplier counts of a design file")
    p.add_argument("design")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("presets", help="channelizer presets")
    psub = p.add_subparsers(dest="presets_command", required=True)
    pl = psub.add_parser("list", help="list presets as CSV")
    pl.set_defaults(func=cmd_presets)
    return parser


def _fail(code, exc):
    sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc), "exit": code}) + "\n")
    return code


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = None if argv is None else ["modfrm", *argv]
    try:
        return args.func(args)
    except (SpecError, ValueError, OSError) as exc:
        return _fail(EXIT_INVALID, exc)
    except (DesignError, ModFrmError, FloatingPointError) as exc:
        return _fail(EXIT_NUMERIC, exc)


if __name__ == "__main__":
    sys.exit(main())
