"""Command-line surface.

Subcommands: dispersion, entropy, fit, tower, sweep, classify, es-probe,
spin. Every command takes --config (JSON), optional --set key=value
overrides, --out for the data file, and --policy to override the branch
policy. Outputs are CSV (JSON-lines for sweeps); a .record.json side file
carries the config snapshot, tool version, wall time, and summary values.
"""

import argparse
import json
import sys
import time

import numpy as np

from . import __version__, band, entanglement, scaling, spins, states
from .config import (ResultRecord, RunConfig, encode_complex, load_config,
                     write_csv, write_record)
from .errors import ConfigInvalid, IoFailure, NhchainError
from .scaling import SweepSpec


def _apply_overrides(doc: dict, pairs):
    for item in pairs or ():
        if "=" not in item:
            raise ConfigInvalid(f"--set needs key=value, got {item!r}")
        key, _, raw = item.partition("=")
        try:
            doc[key] = json.loads(raw)
        except json.JSONDecodeError:
            doc[key] = raw
    return doc


def _load(args) -> RunConfig:
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise IoFailure(f"cannot read config {args.config}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigInvalid(f"config is not valid JSON: {exc}") from exc
    else:
        doc = {}
    _apply_overrides(doc, args.set)
    cfg = load_config(doc)
    if args.policy:
        cfg.policy = args.policy
    if args.out:
        cfg.out = args.out
    if cfg.out is None:
        raise ConfigInvalid("no output path: pass --out or set 'out' in the config")
    return cfg


def _record(cfg: RunConfig, outputs: dict, t0: float) -> ResultRecord:
    return ResultRecord(config=cfg.to_dict(), outputs=outputs,
                        version=__version__, wall_time_s=time.time() - t0)


def _fit_outputs(fit) -> dict:
    return {
        "c": encode_complex(fit.c),
        "gamma": encode_complex(fit.gamma),
        "intercept": encode_complex(fit.intercept),
        "residual": fit.residual,
        "window": list(fit.window),
    }


def _entropy_profile_for(cfg: RunConfig):
    if cfg.model in ("lambda", "raw", "field"):
        return scaling.entropy_profile(cfg.model_params(), cfg.L, cfg.boundary,
                                       cfg.delta_kappa, policy=cfg.policy, fermi=cfg.fermi)
    if cfg.model == "tfim":
        return spins.tfim_entropy_profile(float(cfg.params["J"].real), cfg.params["h"],
                                          cfg.L, cfg.delta_kappa, policy=cfg.policy)
    if cfg.model == "yanglee":
        j = complex(cfg.params.get("J", 1.0)).real
        kappa = complex(cfg.params.get("kappa", 0.0)).real
        return spins.yang_lee_entropy_profile(cfg.params["N"], complex(cfg.params["h"]).real,
                                              j, kappa)
    raise ConfigInvalid(f"model {cfg.model!r} has no entropy profile")


def cmd_dispersion(cfg: RunConfig) -> dict:
    p = cfg.model_params()
    g = states.grid(cfg.L, cfg.boundary if cfg.boundary != "obc" else "pbc", cfg.delta_kappa)
    rows = []
    for k in g.ks:
        ep, em = band.dispersion(p, k)
        rows.append((float(k), ep.real, ep.imag, em.real, em.imag))
    write_csv(cfg.out, ["k", "re_eplus", "im_eplus", "re_eminus", "im_eminus"], rows)
    seps = band.locate_seps(p)
    return {"seps": [float(k) for k in seps]}


def cmd_entropy(cfg: RunConfig) -> dict:
    prof = _entropy_profile_for(cfg)
    rows = [(int(l), s.real, s.imag) for l, s in prof.samples]
    write_csv(cfg.out, ["l", "re_s", "im_s"], rows)
    return {"L": prof.L, "boundary": prof.boundary, "delta_kappa": prof.delta_kappa}


def cmd_fit(cfg: RunConfig) -> dict:
    prof = _entropy_profile_for(cfg)
    fit = scaling.fit_central_charge(prof, cfg.fit_window)
    write_csv(cfg.out,
              ["re_c", "im_c", "re_gamma", "im_gamma", "re_intercept", "im_intercept",
               "residual", "window_lo", "window_hi"],
              [(fit.c.real, fit.c.imag, fit.gamma.real, fit.gamma.imag,
                fit.intercept.real, fit.intercept.imag, fit.residual,
                fit.window[0], fit.window[1])])
    return _fit_outputs(fit)


def cmd_tower(cfg: RunConfig) -> dict:
    tower = scaling.conformal_tower(cfg.model_params(), cfg.L, cfg.boundary)
    rows = [(float(d),) for d in tower.deltas]
    write_csv(cfg.out, ["delta"], rows)
    return {"e0": encode_complex(tower.e0), "eT": encode_complex(tower.eT),
            "n_levels": int(tower.deltas.size)}


def cmd_sweep(cfg: RunConfig) -> dict:
    if cfg.sweep is None:
        raise ConfigInvalid("sweep command needs a 'sweep' section")
    spec = SweepSpec(axis=cfg.sweep.axis, values=cfg.sweep.values, m=cfg.sweep.m,
                     r_h=cfg.sweep.r_h, L=cfg.sweep.L, delta_kappa=cfg.sweep.delta_kappa,
                     zeta=cfg.sweep.zeta, gap=cfg.sweep.gap, boundary=cfg.boundary,
                     policy=cfg.policy, window=cfg.fit_window)
    records = scaling.c_flow(spec)
    try:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            for rec in records:
                doc = {"inputs": rec.inputs, "error": rec.error, "timestamp": rec.timestamp}
                if rec.fit is not None:
                    doc["fit"] = _fit_outputs(rec.fit)
                fh.write(json.dumps(doc, sort_keys=True) + "\n")
    except OSError as exc:
        raise IoFailure(f"cannot write {cfg.out}: {exc}") from exc
    return {"n_points": len(records),
            "n_errors": sum(1 for r in records if r.error is not None)}


def cmd_classify(cfg: RunConfig) -> dict:
    result = scaling.classify_case(cfg.model_params())
    rows = [(result.spectrum_kind, result.entropy_class, result.ind,
             ";".join(f"{e.real:+.6f}{e.imag:+.6f}j" for e in result.edge_modes) or "none")]
    write_csv(cfg.out, ["spectrum", "entropy_class", "ind", "edge_modes"], rows)
    return {"spectrum": result.spectrum_kind, "entropy_class": result.entropy_class,
            "ind": result.ind,
            "edge_modes": [encode_complex(e) for e in result.edge_modes]}


def cmd_es_probe(cfg: RunConfig) -> dict:
    p = cfg.model_params()
    g = states.grid(cfg.L, cfg.boundary, cfg.delta_kappa)
    ground = states.fill_ground(p, g)
    exc_ik, exc_band = states.exceptional_mode(p, g, ground)
    variants = {
        "ground": ground,
        "quasiparticle": states.add_quasiparticle(ground, cfg.L // 4, +1),
        "quasihole": states.remove_mode(ground, exc_ik, exc_band),
    }
    l = cfg.l if cfg.l is not None else cfg.L // 2
    outputs = {}
    for tag, occ in variants.items():
        c = states.correlation(p, g, occ)
        es = entanglement.single_particle_es(
            entanglement.restrict(c, entanglement.Region(0, l)))
        kinds = es.kinds()
        rows = [(i, v.real, v.imag, kinds[i]) for i, v in enumerate(es.values)]
        path = f"{cfg.out}.{tag}.csv"
        write_csv(path, ["index", "re_c", "im_c", "kind"], rows)
        outputs[tag] = path
    return {"files": outputs, "l": l,
            "exceptional_mode": {"k_index": exc_ik, "band": exc_band}}


def cmd_spin(cfg: RunConfig) -> dict:
    if cfg.model == "toy":
        variant = cfg.params.get("variant", "single")
        phi = float(cfg.params.get("phi", 0.0).real)
        toy = spins.toy_qubit(phi) if variant == "single" else spins.toy_two_qubit(phi)
        rows = [(i, v.real, v.imag, b.real, b.imag)
                for i, (v, b) in enumerate(zip(toy.values, toy.binorms))]
        write_csv(cfg.out, ["index", "re_e", "im_e", "re_binorm", "im_binorm"], rows)
        return {"coalesced": toy.coalesced,
                "values": [encode_complex(v) for v in toy.values]}
    if cfg.model in ("tfim", "yanglee"):
        prof = _entropy_profile_for(cfg)
        rows = [(int(l), s.real, s.imag) for l, s in prof.samples]
        write_csv(cfg.out, ["l", "re_s", "im_s"], rows)
        out = {"L": prof.L}
        if prof.L - 1 >= 5:
            fit = scaling.fit_central_charge(prof, cfg.fit_window)
            out["fit"] = _fit_outputs(fit)
        return out
    raise ConfigInvalid("spin command needs a tfim, yanglee, or toy model")


_COMMANDS = {
    "dispersion": cmd_dispersion,
    "entropy": cmd_entropy,
    "fit": cmd_fit,
    "tower": cmd_tower,
    "sweep": cmd_sweep,
    "classify": cmd_classify,
    "es-probe": cmd_es_probe,
    "spin": cmd_spin,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nhchain",
                                     description="entanglement toolkit for non-Hermitian chains")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="path to a JSON config document")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a config field (value parsed as JSON)")
        p.add_argument("--out", help="output data path")
        p.add_argument("--policy", choices=("paired", "principal", "magnitude"))
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.time()
    try:
        cfg = _load(args)
        outputs = _COMMANDS[args.command](cfg)
        write_record(cfg.out + ".record.json", _record(cfg, outputs, t0))
    except ConfigInvalid as exc:
        print(json.dumps({"error": "ConfigInvalid", "detail": str(exc)}), file=sys.stderr)
        return 2
    except IoFailure as exc:
        print(json.dumps({"error": "IoFailure", "detail": str(exc)}), file=sys.stderr)
        return 3
    except NhchainError as exc:
        print(json.dumps({"error": type(exc).__name__, "detail": str(exc)}), file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
