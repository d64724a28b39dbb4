"""Regenerate the bundled data files under src/elfilter/data.

Needs the optional ``wordfreq``, ``nltk`` and ``scikit-learn`` packages, which
are not runtime dependencies of elfilter.
"""
import re
from pathlib import Path

import wordfreq
from nltk.stem.lancaster import LancasterStemmer
from sklearn.feature_extraction.text import ENGLISH_STOP_WORDS

DATA = Path(__file__).resolve().parents[1] / "src" / "elfilter" / "data"


def main():
    DATA.mkdir(parents=True, exist_ok=True)
    with open(DATA / "unigrams.tsv", "w", encoding="utf-8") as f:
        for word in wordfreq.top_n_list("en", 40000):
            if not re.fullmatch(r"[a-z0-9]+", word):
                continue
            count = max(1, round(wordfreq.word_frequency(word, "en") * 1e9))
            f.write(f"{word}\t{count}\n")
    with open(DATA / "stopwords.txt", "w", encoding="utf-8") as f:
        for word in sorted(ENGLISH_STOP_WORDS):
            f.write(word + "\n")
    with open(DATA / "lancaster_rules.txt", "w", encoding="utf-8") as f:
        f.write("# Paice/Husk stemming rules, one per line: reversed ending, optional\n")
        f.write("# '*' (intact words only), characters to remove, append string, and\n")
        f.write("# '>' (continue) or '.' (stop).\n")
        for rule in LancasterStemmer.default_rule_tuple:
            f.write(rule + "\n")


if __name__ == "__main__":
    main()
