from collections import Counter

from hypothesis import given, settings
from hypothesis import strategies as st

from elfilter.corpus import Micropost
from elfilter.textproc import NAMESPACES, TextProcessor, bigrams, remove_stopwords, stem, tokenize


def test_tokenize_strips_urls_and_keeps_hashtags():
    assert tokenize("see #royalvisitusa http://t.co/x") == ["see", "#royalvisitusa"]
    assert tokenize("Hello, @Diego!") == ["hello", "diego"]
    assert tokenize("") == []


def test_royal_visit_bag_composed_from_sub_operations(textproc):
    post = Micropost("1", 0, "Royal visit")
    tokens = tokenize(post.text)
    kept = remove_stopwords(tokens, textproc.stopwords)
    assert kept == ["royal", "visit"]
    expected = Counter()
    for t in kept:
        expected["word:" + t] += 1
        expected["stem:" + stem(t)] += 1
    expected.update(bigrams(tokens))
    assert textproc.extract_features(post) == expected
    assert expected["bigram:royal_visit"] == 1


def test_hashtag_features(textproc):
    bag = textproc.extract_features(Micropost("1", 0, "#royalvisitusa"))
    assert bag["hashtag:royalvisitusa"] == 1
    for w in ("royal", "visit", "usa"):
        assert bag["word:" + w] == 1
        assert bag["stem:" + stem(w)] >= 1


def test_stopwords_dropped_but_bigrams_kept(textproc):
    bag = textproc.extract_features(Micropost("1", 0, "the hand of god"))
    assert "word:the" not in bag and "word:of" not in bag
    assert bag["bigram:the_hand"] == 1 and bag["bigram:of_god"] == 1


def test_title_equal_to_text_doubles_counts(textproc):
    alone = textproc.extract_features(Micropost("1", 0, "Royal visit #usa"))
    doubled = textproc.extract_features(Micropost("1", 0, "Royal visit #usa", ("u",), ("Royal visit #usa",)))
    assert doubled == Counter({k: 2 * v for k, v in alone.items()})


_words = st.lists(st.sampled_from(["royal", "visit", "diego", "goal", "#handofgod", "the", "2012"]), max_size=6)


@settings(deadline=None)
@given(_words, _words)
def test_sources_are_additive(a, b):
    tp = TextProcessor()
    ta, tb = " ".join(a), " ".join(b)
    both = tp.extract_features(Micropost("1", 0, ta, ("u",), (tb,)))
    assert both == tp.extract_features(Micropost("1", 0, ta)) + tp.extract_features(Micropost("1", 0, tb))
    assert all(k.startswith(NAMESPACES) for k in both)
    assert all(v > 0 for v in both.values())


def test_small_sub_operations():
    assert tokenize("Royal Visit!") == ["royal", "visit"]
    assert remove_stopwords(["the", "visit"], {"the"}) == ["visit"]
    assert remove_stopwords(["the", "of"], {"the", "of"}) == []
    assert bigrams(["royal", "visit", "usa"]) == ["bigram:royal_visit", "bigram:visit_usa"]
    assert bigrams(["royal"]) == [] and bigrams([]) == []


def test_empty_post_empty_bag(textproc):
    assert textproc.extract_features(Micropost("1", 0, "")) == Counter()


def test_title_only_features(textproc):
    bag = textproc.extract_features(Micropost("1", 0, "", ("http://x",), ("Diego goal",)))
    assert bag["word:diego"] == 1 and bag["bigram:diego_goal"] == 1
