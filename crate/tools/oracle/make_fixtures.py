"""Regenerates crates/core/fixtures/*.json with PARI/GP (through cypari2).

Run once by hand; the Rust test suite only reads the committed output.
Requires cypari2 built against PARI >= 2.15 (for bnflog / bnflogef).
"""
import json
import os
import sys

import cypari2

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "..", "..", "crates", "core", "fixtures")
PREC = 40

pari = cypari2.Pari()
pari.allocatemem(4 * 10**9)
pari('read("%s")' % os.path.join(HERE, "logclass_oracle.gp"))


def coords(nf, elt, n):
    """Power-basis coordinates (as rational strings) of an nf element."""
    pol = pari.lift(pari.nfbasistoalg(nf, elt))
    return [str(c) for c in pari.Vecrev(pol, n)]


def ints(v):
    return [int(a) for a in v]


def provenance(extra=""):
    return ("PARI/GP %s via cypari2: bnfinit, bnfcertify, bnfsunit, bnflog, "
            "bnflogef, factorpadic, nfisincl; see tools/oracle. %s" % (pari.version()[:3], extra)).strip()


def quadratic_table(ells, dmin, dmax):
    rows = []
    for d in range(dmin, dmax + 1):
        if d in (0, 1) or not pari.issquarefree(d):
            continue
        pari(f'K = bnfinit(x^2 - ({d}), 1)')
        h = int(pari('K.no'))
        cyc = ints(pari('K.cyc'))
        for ell in ells:
            lg = pari(f'bnflog(K, {ell})')
            pari(f'S = lc_places(K, {ell}, []); P = lc_present(K, {ell}, {PREC}, S)')
            orc = ints(pari('lc_torsion(P)'))
            assert sorted(orc) == sorted(ints(lg[0])), (d, ell, orc, lg)
            assert int(pari(f'lc_freecount(P, {ell}, {PREC})')) == 1
            rows.append({"poly": f"x^2{-d:+d}", "d": d, "ell": ell,
                         "class_number": h, "class_group": cyc,
                         "log_torsion": ints(lg[0])})
    return rows


def extension(name, kpol, lpol, ell, full, note=""):
    pari(f'K = bnfinit(subst({kpol}, x, y), 1); L = bnfinit({lpol}, 1)')
    n = int(pari('poldegree(L.pol)'))
    emb = pari(f'nfisincl(subst(K.pol, y, x), L.pol)')
    assert pari.type(emb) != "t_INT", "no embedding"
    emb = emb[0]
    fx = {"name": name, "provenance": provenance(note), "ell": ell,
          "base": {"poly": str(pari('subst(K.pol, y, x)'))},
          "ext": {"poly": str(pari('L.pol'))},
          "embedding": [str(c) for c in pari.Vecrev(emb, n)]}
    if not full:
        return fx
    assert int(pari('bnfcertify(L)')) == 1
    pari(f'SK = lc_places(K, {ell}, []); PK = lc_present(K, {ell}, {PREC}, SK)')
    primes = sorted(set(int(p) for p in pari('apply(pr -> pr.p, SK)')))
    pari(f'emb = lift(nfisincl(K.pol, L.pol)[1]); SL = lc_places(L, {ell}, {primes}); PL = lc_present(L, {ell}, {PREC}, SL)')
    lprimes = sorted(set(int(p) for p in pari('apply(pr -> pr.p, SL)')))
    su = pari('bnfsunit(L, SL)[1]')
    fu = pari('L.fu')
    tu = pari('L.tu')
    ktors = ints(pari('lc_torsion(PK)'))
    ltors = ints(pari('lc_torsion(PL)'))
    assert sorted(ktors) == sorted(ints(pari(f'bnflog(K, {ell})[1]')))
    assert sorted(ltors) == sorted(ints(pari(f'bnflog(L, {ell})[1]')))
    gens = int(pari('#PK[6]'))
    verdicts = []
    for k in range(1, gens + 1):
        triv = int(pari(f'lc_is_trivial(PL, lc_extend(K, L, emb, SK, SL, lc_torsion_gens(PK)[{k}], {ell}), {ell}, {PREC})'))
        verdicts.append("capitulates" if triv else "survives")
    etab = [(int(r[0]), [str(e) for e in r[1]]) for r in pari(f'lc_etable(K, L, emb, {ell})')]
    fx["ext"].update({
        "class_number": int(pari('L.no')),
        "class_group": ints(pari('L.cyc')),
        "signature": ints(pari('L.sign')),
        "units": [coords(pari('L'), u, n) for u in fu],
        "torsion_unit": {"order": int(tu[0]), "generator": coords(pari('L'), tu[1], n)},
        "s_primes": lprimes,
        "s_units": [coords(pari('L'), u, n) for u in su],
    })
    fx["expected"] = {
        "base_class_group": ints(pari('K.cyc')),
        "base_log_torsion": ktors,
        "ext_log_torsion": ltors,
        "log_unramified": all(e == "1" for _, v in etab for e in v),
        "verdicts": verdicts,
        "kernel_order": int(pari(f'lc_kernel_order(PK, PL, K, L, emb, SK, SL, {ell}, {PREC})')),
        "e_tilde": {str(k): v for k, v in etab},
    }
    return fx


def dump(name, obj):
    with open(os.path.join(OUT, name), "w") as fh:
        json.dump(obj, fh, indent=1)
        fh.write("\n")


EXTENSIONS = [
    ("q_qi_3", "x", "x^2+1", 3, False, ""),
    ("q_qsqrt3_3", "x", "x^2-3", 3, False, ""),
    ("q_zeta5_5", "x", "x^4+x^3+x^2+x+1", 5, False, ""),
    ("qi_zeta8_3", "x^2+1", "x^4+1", 3, False, ""),
    ("qi_zeta8_2", "x^2+1", "x^4+1", 2, False, ""),
    ("m35_quartic_2", "x^2+35", "x^4-x^3+5*x^2+2*x+4", 2, True,
     "Quartic subfield of the 2-class field of logarithmically unramified extensions of Q(sqrt(-35))."),
    ("m35_quartic_b_2", "x^2+35", "x^4+34*x^2+324", 2, True, ""),
    ("m51_quartic_2", "x^2+51", "x^4-7*x^2+25", 2, True, ""),
    ("m35_htilde_2", "x^2+35",
     "x^8-4*x^7+14*x^6-28*x^5+93*x^4-144*x^3+416*x^2-348*x+711", 2, True,
     "Normalized logarithmic class field of Q(sqrt(-35)) for ell = 2 (exponent 2)."),
    ("m31_hilbert_3", "x^2+31", "x^6-3*x^5+7*x^4-9*x^3+7*x^2-3*x+1", 3, True,
     "Hilbert class field of Q(sqrt(-31)); cyclic cubic and logarithmically unramified over the base."),
]

if __name__ == "__main__":
    which = set(sys.argv[1:])
    if not which or "quadratic" in which:
        dump("quadratic_logclass.json", {"provenance": provenance(), "rows": quadratic_table([2, 3, 5], -150, 150)})
    for spec in EXTENSIONS:
        if not which or spec[0] in which:
            dump("ext_%s.json" % spec[0], extension(*spec))
            print("wrote", spec[0], flush=True)
