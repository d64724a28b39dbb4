"""Shared test helpers: fixture data, KB strategies and brute-force oracles."""

from collections import Counter, defaultdict
from importlib import resources

from hypothesis import strategies as st


def fixture_kb_text() -> str:
    return resources.files("elfilter.data").joinpath("fixture_kb.tsv").read_text("utf-8")


def fixture_records():
    out = []
    for line in fixture_kb_text().splitlines():
        if line.strip():
            m, e, c, o = line.split("\t")
            out.append((m, e, int(c), int(o)))
    return out


_names = st.sampled_from(["m1", "m2", "m3", "m4 x", "m5"])
_ents = st.sampled_from(["e1", "e2", "e3", "e4"])


@st.composite
def kb_records(draw):
    records = []
    for m in draw(st.sets(_names, max_size=5)):
        ents = draw(st.sets(_ents, min_size=1, max_size=4))
        counts = [draw(st.integers(1, 50)) for _ in ents]
        occ = sum(counts) + draw(st.integers(0, 100))
        records += [(m, e, c, occ) for e, c in zip(sorted(ents), counts)]
    return records


def raw_stats(records):
    occ, links, pairs = {}, Counter(), defaultdict(dict)
    for m, e, c, o in records:
        occ[m] = o
        links[m] += c
        pairs[m][e] = c
    lp = {m: links[m] / occ[m] for m in occ}
    cm = {(m, e): c / links[m] for m in pairs for e, c in pairs[m].items()}
    return lp, cm


def expected_features(records, mention, method, rho, stats=None):
    """Expansion features of one spotted mention, by exhaustive enumeration.

    ``stats`` may carry a precomputed ``raw_stats(records)``.
    """
    lp, cm = stats if stats is not None else raw_stats(records)
    if method == "none":
        return Counter()
    if method == "exp1":
        return Counter({"ment:" + mention.replace(" ", "_"): 1})
    out = Counter()
    pairs = [(m, e) for (m, e) in cm if m == mention]
    if method == "exp2":
        for m, e in pairs:
            if lp[m] * cm[(m, e)] > rho:
                out["ent:" + e] += 1
    elif method == "exp2_1ent":
        if pairs:
            m, e = min(pairs, key=lambda t: (-cm[t], t[1]))
            if lp[m] * cm[(m, e)] > rho:
                out["ent:" + e] += 1
    elif method == "exp3":
        for mi, ek in pairs:
            for (mj, ej), c in cm.items():
                if ej == ek and mj != mi and lp[mi] * cm[(mi, ek)] * lp[mj] * c > rho:
                    out["sf:" + mj.replace(" ", "_")] += 1
    return out


# (criterion, passed, detail) lines collected by the acceptance suite
ACCEPTANCE: list[tuple[str, bool, str]] = []
