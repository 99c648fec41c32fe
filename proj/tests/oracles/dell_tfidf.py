#!/usr/bin/env python3
"""Independent tf-idf / cosine computation for the DELL candidate listings.

Works straight from the candidate listings and the functional-feature facet,
with no model file and no C++ code. Prints the similarity of each candidate
to C1 at full precision; the C++ tests freeze these numbers.

    python3 dell_tfidf.py [--check]

With --check, exits non-zero unless C1.3 ranks above C1.4 and the frozen
values below still match.
"""
import math
import sys

FUNCTIONAL = {
    "UbuntuLinux", "VistaWithDowngradeToXP", "WinXPHome",
    "320GB", "160GB", "120GB",
    "CD_DVD+RW", "DVD_ROM_DRIVE", "BluRayDisc",
    "2GB", "1GB",
    "IntelAtom", "IntelCore2Duo",
}

C1 = ["Mininotebook", "UbuntuLinux", "320GB", "CD_DVD+RW", "UltraLight", "2GB", "IntelAtom", "$400_-$800"]

CANDIDATES = {
    "C1.1": ["Mininotebook", "VistaWithDowngradeToXP", "160GB", "DVD_ROM_DRIVE", "UltraLight", "2GB", "IntelAtom", "$400_-$800"],
    "C1.2": ["Mininotebook", "UbuntuLinux", "120GB", "BluRayDisc", "UltraLight", "1GB", "IntelCore2Duo", "$400_-$800"],
    "C1.3": ["Mininotebook", "UbuntuLinux", "160GB", "BluRayDisc", "UltraLight", "2GB", "IntelAtom", "$400_-$800"],
    "C1.4": ["Mininotebook", "WinXPHome", "120GB", "BluRayDisc", "UltraLight", "1GB", "IntelAtom", "$400_-$800"],
}

FROZEN = {
    "C1.1": 0.24937812325349193,
    "C1.2": 0.2533474804904412,
    "C1.3": 0.8059147784407631,
    "C1.4": 0.04640022001358621,
}


def weights(doc, df, n, log=math.log):
    terms = [t for t in doc if t in FUNCTIONAL and t in df]
    return {t: 1 * log(n / df[t]) for t in terms}


def cos(u, v):
    dot = sum(w * v.get(t, 0.0) for t, w in u.items())
    nu = math.sqrt(sum(w * w for w in u.values()))
    nv = math.sqrt(sum(w * w for w in v.values()))
    return 0.0 if nu == 0 or nv == 0 else dot / (nu * nv)


def scores(log=math.log):
    n = len(CANDIDATES)
    df = {}
    for doc in CANDIDATES.values():
        for t in set(doc):
            if t in FUNCTIONAL:
                df[t] = df.get(t, 0) + 1
    q = weights(C1, df, n, log)
    return {cid: cos(q, weights(doc, df, n, log)) for cid, doc in CANDIDATES.items()}


def main():
    s = scores()
    for cid in sorted(s):
        print(f"{cid} {s[cid]!r}")
    s10 = scores(math.log10)
    order = sorted(s, key=lambda c: (-s[c], c))
    order10 = sorted(s10, key=lambda c: (-s10[c], c))
    print("order", " ".join(order))
    if "--check" in sys.argv:
        ok = order == order10 and order.index("C1.3") < order.index("C1.4")
        ok = ok and all(abs(s[c] - FROZEN[c]) < 1e-12 for c in FROZEN)
        return 0 if ok else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
