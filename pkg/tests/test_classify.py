import pytest

from lieform import (DynkinType, EXPECTED_RATIO, InvalidRank, NoConstantRatio,
                     b_series_kernel_witness, oracle_perfect, predict_perfect,
                     ratio_check, verdict_with_oracle)

ALL_TYPES = (
    [DynkinType(s, n) for s in "ABC" for n in range(1, 9)]
    + [DynkinType("D", n) for n in range(3, 9)]
    + [DynkinType("E", n) for n in (6, 7, 8)]
    + [DynkinType("F", 4), DynkinType("G", 2)]
)


@pytest.mark.parametrize("series,rank,p,predicted,reason", [
    ("A", 2, 3, False, "A_DIV"),      # 3 | rank + 1
    ("A", 2, 5, True, "PERFECT"),
    ("A", 1, 2, False, "P_EQ_2"),     # p = 2 wins over 2 | rank + 1
    ("B", 4, 7, False, "B_DIV"),      # 7 = 2*rank - 1
    ("B", 4, 5, True, "PERFECT"),
    ("C", 6, 7, False, "C_DIV"),      # 7 | rank + 1
    ("D", 7, 3, False, "D_DIV"),      # 3 | rank - 1
    ("D", 7, 5, True, "PERFECT"),
    ("G", 2, 3, False, "EXC_P3"),
    ("F", 4, 3, False, "EXC_P3"),
    ("E", 6, 3, False, "EXC_P3"),
    ("E", 7, 3, False, "EXC_P3"),
    ("E", 8, 3, False, "EXC_P3"),
    ("E", 8, 5, False, "E8_P5"),
    ("E", 8, 7, True, "PERFECT"),
    ("G", 2, 5, True, "PERFECT"),
    ("E", 6, 2, False, "P_EQ_2"),
])
def test_predictions_hand_checked(series, rank, p, predicted, reason):
    v = predict_perfect(DynkinType(series, rank), p)
    assert v.predicted is predicted
    assert v.reason == reason


def test_prediction_matches_oracle_spot_checks():
    for t, p in [(DynkinType("A", 4), 5), (DynkinType("B", 3), 5),
                 (DynkinType("C", 2), 3), (DynkinType("D", 5), 2),
                 (DynkinType("E", 6), 13), (DynkinType("G", 2), 7)]:
        v = verdict_with_oracle(t, p)
        assert v.oracle is not None
        assert v.agree


def test_oracle_false_for_every_type_at_two():
    for t in ALL_TYPES:
        assert oracle_perfect(t, 2) is False


def test_oracle_rank_cap():
    with pytest.raises(InvalidRank):
        oracle_perfect(DynkinType("A", 9), 5)


@pytest.mark.parametrize("series,ranks", [
    ("A", range(1, 8)), ("B", range(1, 9)), ("C", range(1, 9)),
    ("D", range(3, 9)),
])
def test_killing_to_trace_ratio(series, ranks):
    for n in ranks:
        assert ratio_check(DynkinType(series, n)) == EXPECTED_RATIO[series](n)


def test_ratio_undefined_for_exceptional_types():
    with pytest.raises(NoConstantRatio):
        ratio_check(DynkinType("G", 2))


def test_low_rank_ratio_degenerations():
    # B1 and C1 share sl2 structure but carry different modules
    assert ratio_check(DynkinType("B", 1)) == 1
    assert ratio_check(DynkinType("C", 1)) == 4
    assert ratio_check(DynkinType("A", 1)) == 4


def test_kernel_witness_b_series():
    for n in range(1, 9):
        w = b_series_kernel_witness(n)
        assert w.rank == n
        assert len(w.vectors) == 2 * n
        assert w.ideal_ok and w.nilpotent_ok and w.in_kernel
        assert w.all_ok


def test_kernel_witness_input_validation():
    with pytest.raises(InvalidRank):
        b_series_kernel_witness(0)
    with pytest.raises(InvalidRank):
        b_series_kernel_witness(9)
    with pytest.raises(ValueError):
        b_series_kernel_witness(2, p=3)


def test_isogenous_low_rank_types_agree():
    for p in (2, 3, 5, 7, 11):
        a1 = predict_perfect(DynkinType("A", 1), p).predicted
        assert predict_perfect(DynkinType("B", 1), p).predicted == a1
        assert predict_perfect(DynkinType("C", 1), p).predicted == a1
        b2 = predict_perfect(DynkinType("B", 2), p).predicted
        assert predict_perfect(DynkinType("C", 2), p).predicted == b2
        a3 = predict_perfect(DynkinType("A", 3), p).predicted
        assert predict_perfect(DynkinType("D", 3), p).predicted == a3
