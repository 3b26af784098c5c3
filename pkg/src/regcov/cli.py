"""Batch front door: decide covering/separation/membership instances and
emit verdicts as text or JSON.

Exit codes: 0 decided (either way), 2 input error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Optional

from .errors import Caps, DEFAULT_CAPS, InputError, ResourceCapError
from . import rx
from .fa import (Alphabet, Nfa, alphabet_exact, includes, is_empty,
                 nfa_complement, nfa_from_json, nfa_intersection, regex_to_nfa,
                 transition_monoid, universal_language, upward_closure)
from .covers import (Cover, at_cover, bsigma1_cover, fo2_cover, restrict_cover,
                     sigma1_cover, verify_cover)
from .rating import Extension, rm_from_multiset
from .saturation import (ClassId, CoverDecision, decide_pointed_covering,
                         decide_universal_covering)
from .pieces import is_k_piecewise_testable, pt_partition

UNIVERSAL = "%universal"


@dataclass
class Instance:
    alphabet: Alphabet
    class_id: ClassId
    target: object                # Nfa or UNIVERSAL
    against: list                 # list of Nfa
    emit_cover: bool = False
    verify: bool = False
    json_output: bool = False
    caps: Caps = DEFAULT_CAPS
    seed: int = 0


@dataclass
class Verdict:
    class_name: str
    coverable: bool
    imprint: list = field(default_factory=list)
    noncoverable_subsets: list = field(default_factory=list)
    cover: Optional[dict] = None
    verified: Optional[dict] = None
    separator: Optional[str] = None
    member: Optional[bool] = None
    stats: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "class": self.class_name,
            "coverable": self.coverable,
            "imprint": self.imprint,
            "noncoverable_subsets": self.noncoverable_subsets,
            "cover": self.cover,
            "verified": self.verified,
            "separator": self.separator,
            "member": self.member,
            "stats": self.stats,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Verdict":
        return cls(
            class_name=doc["class"],
            coverable=doc["coverable"],
            imprint=[list(m) for m in doc["imprint"]],
            noncoverable_subsets=[list(m) for m in doc["noncoverable_subsets"]],
            cover=doc.get("cover"),
            verified=doc.get("verified"),
            separator=doc.get("separator"),
            member=doc.get("member"),
            stats=doc.get("stats", {}),
        )


def _masks_to_lists(masks) -> list:
    out = [sorted(i for i in range(64) if m >> i & 1) for m in masks]
    return sorted(out, key=lambda s: (len(s), s))


# -- instance parsing ----------------------------------------------------------------

def parse_language(spec, alphabet: Alphabet):
    """Regex text, %universal, or an NFA JSON object."""
    if isinstance(spec, str):
        if spec.strip() == UNIVERSAL:
            return UNIVERSAL
        return regex_to_nfa(rx.regex_parse(spec, alphabet.symbols), alphabet)
    if isinstance(spec, dict):
        nfa = nfa_from_json(spec.get("nfa", spec))
        if nfa.alphabet != alphabet:
            raise InputError("NFA alphabet differs from the instance alphabet")
        return nfa
    raise InputError(f"cannot interpret language spec {spec!r}")


def load_instance(args) -> Instance:
    doc = {}
    if args.instance:
        with open(args.instance, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    alphabet_text = args.alphabet or doc.get("alphabet")
    if not alphabet_text:
        raise InputError("an alphabet is required (--alphabet or instance file)")
    alphabet = Alphabet(alphabet_text)
    class_name = args.cls or doc.get("class")
    if not class_name:
        raise InputError("a class is required (--class or instance file)")
    class_id = ClassId.parse(class_name)
    target_spec = args.target if args.target is not None else doc.get("target")
    against_specs = list(args.against or []) or list(doc.get("against", []))
    options = doc.get("options", {})
    caps = DEFAULT_CAPS.with_overrides(
        max_elements=args.max_elements or options.get("max_elements"),
        max_det_states=args.max_states or options.get("max_states"),
        max_k=args.max_k or options.get("max_k"),
    )
    target = parse_language(target_spec, alphabet) if target_spec is not None else None
    against = [parse_language(s, alphabet) for s in against_specs]
    if any(lang is UNIVERSAL for lang in against):
        raise InputError("%universal is only meaningful as the target")
    return Instance(
        alphabet=alphabet,
        class_id=class_id,
        target=target,
        against=against,
        emit_cover=bool(args.emit_cover or options.get("emit_cover")),
        verify=bool(args.verify or options.get("verify")),
        json_output=bool(args.json or options.get("json")),
        caps=caps,
        seed=args.seed if args.seed is not None else options.get("seed", 0),
    )


# -- pipelines ------------------------------------------------------------------------

def _synthesize_universal(class_id: ClassId, decision: CoverDecision,
                          ext: Extension, caps: Caps) -> Optional[Cover]:
    if class_id is ClassId.AT:
        return at_cover(ext.tau.alphabet, caps=caps)
    if class_id is ClassId.BSIGMA1:
        return bsigma1_cover(ext.tau, decision.raw_imprint, caps)
    if class_id is ClassId.FO2:
        return fo2_cover(decision.rating_map, decision.raw_imprint, caps=caps)
    return None


def run_cover(inst: Instance) -> Verdict:
    t0 = time.perf_counter()
    if not inst.against:
        raise InputError("covering needs at least one language to separate against")
    if inst.target is None:
        raise InputError("covering needs a target language (or %universal)")
    class_id = inst.class_id
    cover_doc = None
    verified_doc = None

    if class_id.pointed:
        if inst.target is UNIVERSAL:
            target_nfa = universal_language(inst.alphabet)
        else:
            target_nfa = inst.target
        alpha, accepting = transition_monoid(target_nfa, inst.caps)
        ext = rm_from_multiset(inst.against, inst.caps)
        decision = decide_pointed_covering(alpha, accepting, ext, class_id, inst.caps)
        cover = None
        if inst.emit_cover and decision.coverable and class_id is ClassId.SIGMA1:
            cover = sigma1_cover(alpha, accepting, inst.alphabet, inst.caps)
    else:
        if inst.target is UNIVERSAL:
            items = list(inst.against)
            target_index = None
            target_nfa = universal_language(inst.alphabet)
        else:
            items = [inst.target] + list(inst.against)
            target_index = 0
            target_nfa = inst.target
        ext = rm_from_multiset(items, inst.caps)
        decision = decide_universal_covering(ext, class_id, inst.caps, target_index)
        cover = None
        if inst.emit_cover and decision.coverable and class_id.synthesizable:
            cover = _synthesize_universal(class_id, decision, ext, inst.caps)
            if cover is not None and target_index is not None:
                cover = restrict_cover(cover, target_nfa)

    if cover is not None:
        report = verify_cover(cover, target_nfa, inst.against, caps=inst.caps)
        if not report.ok:
            if cover.optimal:
                raise AssertionError("synthesized cover failed verification")
            # depth cap hit before the imprint converged; drop the cover
            cover = None
    if cover is not None:
        cover_doc = cover.to_json()
        if inst.verify:
            verified_doc = {
                "covers_target": report.covers_target,
                "separating": report.separating,
                "piece_witnesses": report.piece_witnesses,
                "class_ok": report.class_ok,
                "class_note": report.class_note,
            }
            cover_doc["verified"] = verified_doc
    stats = dict(decision.stats)
    stats["wall_ms"] = round((time.perf_counter() - t0) * 1000.0, 3)
    return Verdict(
        class_name=class_id.value,
        coverable=decision.coverable,
        imprint=_masks_to_lists(decision.imprint_masks),
        noncoverable_subsets=_masks_to_lists(decision.noncoverable_masks),
        cover=cover_doc,
        verified=verified_doc,
        stats=stats,
    )


def run_separate(inst: Instance) -> Verdict:
    if len(inst.against) != 1:
        raise InputError("separation takes exactly one language to avoid")
    want_cover = inst.emit_cover or inst.class_id.synthesizable

    def attempt(emit: bool) -> Verdict:
        return run_cover(Instance(
            alphabet=inst.alphabet, class_id=inst.class_id, target=inst.target,
            against=inst.against, emit_cover=emit, verify=inst.verify,
            json_output=inst.json_output, caps=inst.caps, seed=inst.seed))

    try:
        verdict = attempt(want_cover)
    except ResourceCapError:
        if inst.emit_cover:
            raise
        # separator synthesis was opportunistic; the decision still stands
        verdict = attempt(False)
    if verdict.coverable and verdict.cover is not None:
        sep = rx.union_all(
            rx.regex_parse(p["regex"], inst.alphabet.symbols)
            for p in verdict.cover["pieces"])
        sep_nfa = regex_to_nfa(sep, inst.alphabet)
        target_nfa = inst.target if inst.target is not UNIVERSAL else universal_language(inst.alphabet)
        if not includes(target_nfa, sep_nfa, inst.caps):
            raise AssertionError("separator does not contain the first language")
        if not is_empty(nfa_intersection(sep_nfa, inst.against[0])):
            raise AssertionError("separator meets the second language")
        verdict.separator = rx.regex_to_text(sep)
    if not inst.emit_cover:
        verdict.cover = None
    return verdict


def run_member(inst: Instance) -> Verdict:
    if inst.target is None or inst.target is UNIVERSAL:
        raise InputError("membership needs a concrete target language")
    complement = nfa_complement(inst.target, inst.caps)
    verdict = run_separate(Instance(
        alphabet=inst.alphabet, class_id=inst.class_id, target=inst.target,
        against=[complement], emit_cover=inst.emit_cover, verify=inst.verify,
        json_output=inst.json_output, caps=inst.caps, seed=inst.seed))
    verdict.member = verdict.coverable
    return verdict


_CHAIN = (ClassId.FO, ClassId.FO2, ClassId.BSIGMA1, ClassId.AT)


def run_imprint(inst: Instance) -> Verdict:
    t0 = time.perf_counter()
    if not inst.against:
        raise InputError("imprint needs at least one language (--against)")
    ext = rm_from_multiset(inst.against, inst.caps)
    stats = {"rating_set_log2": ext.tau.semiring.log2_size()}
    if inst.class_id.pointed:
        if inst.target is None:
            raise InputError("pointed imprints need a target language (--target)")
        target_nfa = inst.target if inst.target is not UNIVERSAL else universal_language(inst.alphabet)
        alpha, accepting = transition_monoid(target_nfa, inst.caps)
        decision = decide_pointed_covering(alpha, accepting, ext, inst.class_id, inst.caps)
    else:
        decision = decide_universal_covering(ext, inst.class_id, inst.caps, None)
    stats.update(decision.stats)
    stats["wall_ms"] = round((time.perf_counter() - t0) * 1000.0, 3)
    return Verdict(
        class_name=inst.class_id.value,
        coverable=decision.coverable,
        imprint=_masks_to_lists(decision.imprint_masks),
        noncoverable_subsets=_masks_to_lists(decision.noncoverable_masks),
        stats=stats,
    )


def run_imprint_chain(inst: Instance) -> dict:
    """Imprints for the Boolean-algebra chain plus inclusion flags."""
    out = {}
    masks = {}
    for cid in _CHAIN:
        sub = Instance(alphabet=inst.alphabet, class_id=cid, target=None,
                       against=inst.against, caps=inst.caps)
        verdict = run_imprint(sub)
        out[cid.value] = verdict.to_json()
        masks[cid] = {frozenset(s) for s in map(tuple, verdict.imprint)}
    out["inclusions"] = {
        "fo <= fo2": masks[ClassId.FO] <= masks[ClassId.FO2],
        "fo <= bsigma1": masks[ClassId.FO] <= masks[ClassId.BSIGMA1],
        "fo2 <= at": masks[ClassId.FO2] <= masks[ClassId.AT],
        "bsigma1 <= at": masks[ClassId.BSIGMA1] <= masks[ClassId.AT],
    }
    return out


# -- oracles ---------------------------------------------------------------------------

def oracle_sigma1_sep(l1: Nfa, l2: Nfa) -> bool:
    """Separable by an existential piece language iff the superword closure
    of the first language misses the second."""
    return is_empty(nfa_intersection(upward_closure(l1), l2))


def oracle_at_imprint(alphabet: Alphabet, langs: list) -> list:
    """Direct atom imprint over the language indices, no semirings involved."""
    masks = set()
    for mask in range(1 << len(alphabet)):
        atom = alphabet_exact(alphabet, alphabet.from_mask(mask))
        hit = 0
        for i, lang in enumerate(langs):
            if not is_empty(nfa_intersection(atom, lang)):
                hit |= 1 << i
        sub = hit
        while True:
            masks.add(sub)
            if sub == 0:
                break
            sub = (sub - 1) & hit
    return _masks_to_lists(masks)


def run_oracle(inst: Instance, which: str, k: Optional[int]) -> dict:
    if which == "sigma1-sep":
        if inst.target is None or len(inst.against) != 1:
            raise InputError("sigma1-sep needs --target and exactly one --against")
        sep = oracle_sigma1_sep(inst.target, inst.against[0])
        return {"oracle": which, "separable": sep}
    if which == "pt-k":
        if k is None:
            raise InputError("pt-k needs --max-k (the piece bound)")
        pa = pt_partition(k, inst.alphabet, inst.caps)
        doc = {"oracle": which, "k": k, "classes": len(pa.states)}
        if inst.target is not None and inst.target is not UNIVERSAL:
            doc["target_is_ptk"] = is_k_piecewise_testable(inst.target, k, inst.caps)
        return doc
    if which == "at":
        if not inst.against:
            raise InputError("the at oracle needs --against languages")
        return {"oracle": which,
                "imprint": oracle_at_imprint(inst.alphabet, inst.against)}
    raise InputError(f"unknown oracle {which!r}")


# -- entry point -------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regcov",
        description="Decide covering, separation and membership of regular "
                    "languages for the classes at, sigma1, bsigma1, sigma2, fo2, fo.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("cover", "separate", "member", "imprint", "oracle"):
        p = sub.add_parser(name)
        p.add_argument("--class", dest="cls", help="language class (or 'chain' for imprint)")
        p.add_argument("--alphabet")
        p.add_argument("--target")
        p.add_argument("--against", action="append")
        p.add_argument("--instance", help="JSON instance file")
        p.add_argument("--emit-cover", action="store_true")
        p.add_argument("--verify", action="store_true")
        p.add_argument("--json", action="store_true")
        p.add_argument("--max-elements", type=int)
        p.add_argument("--max-k", type=int)
        p.add_argument("--max-states", type=int)
        p.add_argument("--seed", type=int)
        if name == "oracle":
            p.add_argument("--which", required=True,
                           choices=["sigma1-sep", "pt-k", "at"])
    return parser


def _emit(doc, as_json: bool):
    if as_json:
        print(json.dumps(doc, indent=2, sort_keys=True))
        return
    if isinstance(doc, Verdict):
        doc = doc.to_json()
    for key, value in doc.items():
        if value is None:
            continue
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True)
        print(f"{key}: {value}")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "imprint" and (args.cls or "").lower() == "chain":
            args.cls = "at"  # placeholder; the chain runs every class itself
            inst = load_instance(args)
            doc = run_imprint_chain(inst)
            _emit(doc, True)
            return 0
        inst = load_instance(args)
        if args.command == "cover":
            verdict = run_cover(inst)
        elif args.command == "separate":
            verdict = run_separate(inst)
        elif args.command == "member":
            verdict = run_member(inst)
        elif args.command == "imprint":
            verdict = run_imprint(inst)
        elif args.command == "oracle":
            doc = run_oracle(inst, args.which, args.max_k)
            _emit(doc, inst.json_output)
            return 0
        else:  # pragma: no cover
            raise InputError(f"unknown command {args.command!r}")
        _emit(verdict.to_json() if inst.json_output else verdict, inst.json_output)
        return 0
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
