import pytest
from hypothesis import given, strategies as st

from tabrecast.lexicons import AntonymLexicon, coarse_pos, load_abbreviations, load_antonyms
from tabrecast.numwords import cardinal_words, ordinal_suffix, ordinal_words, parse_number_words
from tabrecast.text import depluralize, match_case, norm_text, tokenize


def test_tokens_keep_numbers_and_possessives():
    toks = tokenize("Obama's 1,235 votes, the 44th.")
    assert [t.text for t in toks] == ["obama", "1235", "votes", "the", "44th"]
    assert toks[0].possessive and toks[0].core_end == 5 and toks[0].end == 7


def test_norm_text_ignores_case_and_punctuation():
    assert norm_text("West Front, US Capitol") == norm_text("west front us capitol")


@pytest.mark.parametrize("word, base", [("seats", "seat"), ("parties", "party"), ("boxes", "box"),
                                        ("class", "class"), ("is", "is")])
def test_depluralize(word, base):
    assert depluralize(word) == base


def test_match_case():
    assert match_case("Party", "second party") == "Second party"
    assert match_case("USA", "uk") == "UK"
    assert match_case("seats", "Votes") == "Votes"


@pytest.mark.parametrize("n, words", [(0, ["zero"]), (13, ["thirteen"]), (40, ["forty"]),
                                      (44, ["forty", "four"]), (100, ["one", "hundred"])])
def test_cardinals(n, words):
    assert cardinal_words(n) == words


def test_ordinals():
    assert ordinal_words(44) == ["forty", "fourth"]
    assert ordinal_words(20) == ["twentieth"]
    assert [ordinal_suffix(n) for n in (1, 2, 3, 4, 11, 12, 13, 21, 44, 101)] == [
        "1st", "2nd", "3rd", "4th", "11th", "12th", "13th", "21st", "44th", "101st"]


def test_out_of_range_number_words():
    with pytest.raises(ValueError):
        cardinal_words(101)


def test_parse_reads_longest_phrase():
    assert parse_number_words(["the", "forty", "fourth", "president"], 1) == (44, True, 2)
    assert parse_number_words(["44th"]) == (44, True, 1)
    assert parse_number_words(["a", "hundred"]) == (100, False, 2)
    assert parse_number_words(["seats"]) is None


@given(st.integers(0, 100))
def test_cardinal_words_round_trip(n):
    assert parse_number_words(cardinal_words(n)) == (n, False, len(cardinal_words(n)))


@given(st.integers(0, 100))
def test_ordinal_words_round_trip(n):
    assert parse_number_words(ordinal_words(n)) == (n, True, len(ordinal_words(n)))


def test_bundled_lexicons_load():
    abbrev = load_abbreviations()
    assert abbrev["us"] == ("united", "states")
    lex = load_antonyms()
    assert lex.antonym("most") == "least"
    assert lex.antonym("least") == "most"


def test_antonym_needs_matching_pos():
    lex = AntonymLexicon.from_entries([("winter", "summer", "adj")])
    assert coarse_pos("winter") is None
    assert lex.antonym("winter") is None


def test_bad_lexicon_lines(tmp_path):
    bad = tmp_path / "ant.tsv"
    bad.write_text("most\tleast\n")
    with pytest.raises(ValueError):
        load_antonyms(bad)
    with pytest.raises(ValueError):
        AntonymLexicon.from_entries([("a", "b", "noun")])
