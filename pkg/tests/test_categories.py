import pytest

from unirep.categories import (Atomic, CategorySyntaxError, Leftward, Lexicon, LexiconError,
                               Rightward, Sentence, format_lexicon, is_modifier,
                               parse_category, parse_delta, parse_lexicon, print_category,
                               print_delta, read_lexicon)
from unirep.fixtures import bundled_path

S, N = Atomic("S"), Atomic("N")


@pytest.mark.parametrize("text, expected", [
    ("N", N),
    ("(S/N)/(S/N)", Rightward(Rightward(S, N), Rightward(S, N))),
    ("(N\\S)/N", Rightward(Leftward(N, S), N)),
    ("[S/N]\\[S/N]", Leftward(Rightward(S, N), Rightward(S, N))),
    ("  ( S / N ) ", Rightward(S, N)),
])
def test_parse(text, expected):
    assert parse_category(text) == expected


@pytest.mark.parametrize("cat, text", [
    (S, "S"),
    (Leftward(Rightward(S, N), Rightward(S, N)), "(S/N)\\(S/N)"),
    (Rightward(Rightward(S, S), S), "(S/S)/S"),
])
def test_print(cat, text):
    assert print_category(cat) == text


@pytest.mark.parametrize("text", ["S/N/N", "N\\S/N", "(S/N", "S/N)", "S//N", "S/", "", "S$N",
                                  "(S/N]"])
def test_rejects_bad_notation(text):
    with pytest.raises(CategorySyntaxError) as info:
        parse_category(text)
    assert info.value.position >= 0


def test_ambiguity_error_mentions_it():
    with pytest.raises(CategorySyntaxError, match="ambiguous"):
        parse_category("S/N/N")


def test_delta_notation():
    expr = parse_delta("[δ(Conj)/δ(V2)]/δ(V3)")
    assert expr == Rightward(Rightward(Atomic("Conj"), Atomic("V2")), Atomic("V3"))
    assert print_delta(expr) == "[δ(Conj)/δ(V2)]/δ(V3)"
    assert parse_delta("delta(N1)") == Atomic("N1")


def test_modifier_shape():
    assert is_modifier(parse_category("(S/N)\\(S/N)"))
    assert is_modifier(parse_category("N/N"))
    assert not is_modifier(parse_category("(S/S)/S"))
    assert not is_modifier(N)


def test_sentence_needs_tokens():
    with pytest.raises(ValueError):
        Sentence(())


def test_lexicon_file_round_trip():
    lex = read_lexicon(bundled_path("turkish_diye.lex"))
    assert lex.lookup("git-", "V2") == {parse_category("S\\(S/N)")}
    again = parse_lexicon(format_lexicon(lex))
    assert again.entries == lex.entries


def test_lexicon_accumulates_duplicates():
    lex = parse_lexicon("# two readings\nrun\tV\tN\\S\nrun\tV\t(N\\S)/N\n")
    assert len(lex.lookup("run", "V")) == 2
    assert lex.lookup("run") == lex.lookup("run", "V")


def test_lexicon_errors_carry_line_numbers():
    with pytest.raises(LexiconError, match="line 2"):
        parse_lexicon("a\tN\tN\nb\tN\n")
    with pytest.raises(LexiconError, match="line 1"):
        parse_lexicon("a\tN\tS/N/N\n")


def test_lexicon_missing():
    lex = Lexicon()
    lex.add("girl", "N", "N")
    sent = Sentence.from_pairs([("the", "Det"), ("girl", "N")])
    assert [t.form for t in lex.missing(sent)] == ["the"]
