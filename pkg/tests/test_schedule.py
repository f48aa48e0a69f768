import numpy as np
import pytest

from ctsp.instance import Instance
from ctsp.schedule import (
    UNSCHEDULED,
    InsertionCandidate,
    Schedule,
    apply_candidate,
    dump_schedule,
    makespan,
    new_partial,
    parse_schedule_dump,
    validate,
)


def kinds(violations):
    return {(v.kind, v.detail) for v in violations}


def test_new_partial(T1):
    S = new_partial(T1, 1)
    assert S.starts() == {1: 0, 2: 4} and S.sigma_tasks == [1, 2] and S.cmax == 5
    S = new_partial(T1, 2)
    assert S.starts() == {3: 0, 4: 2} and S.sigma_tasks == [3, 4] and S.cmax == 3
    single = Instance.from_triples([(5, 0, 7)])
    S = new_partial(single, 1)
    assert S.starts() == {1: 0, 2: 5} and S.cmax == 12
    with pytest.raises(IndexError):
        new_partial(T1, 3)


def test_apply_nested(T1):
    S = new_partial(T1, 1)
    out = apply_candidate(S, InsertionCandidate(2, True, 2, 2, 1, 0), T1)
    assert out.sigma_tasks == [1, 3, 4, 2]
    assert out.starts() == {1: 0, 3: 1, 4: 3, 2: 4}
    assert out.cmax == 5
    assert not validate(out, T1, complete=True)
    assert S.sigma_tasks == [1, 2]  # input untouched


def test_apply_push(T2):
    out = apply_candidate(new_partial(T2, 1), InsertionCandidate(2, True, 2, 3, 5, 2), T2)
    assert out.sigma_tasks == [1, 3, 2, 4]
    assert out.starts() == {1: 0, 3: 5, 2: 6, 4: 8}
    assert out.cmax == 10
    assert not validate(out, T2, complete=True)


def test_apply_append(T1):
    out = apply_candidate(new_partial(T1, 2), InsertionCandidate(1, True, 3, 3, 3, 5), T1)
    assert out.sigma_tasks == [3, 4, 1, 2]
    assert out.cmax == 8
    assert not validate(out, T1, complete=True)


def test_apply_rejects_bad_candidates(T1):
    S = new_partial(T1, 1)
    with pytest.raises(ValueError):
        apply_candidate(S, InsertionCandidate(2, False, 2, 2, 1, float("inf")), T1)
    with pytest.raises(ValueError):
        apply_candidate(S, InsertionCandidate(1, True, 2, 2, 1, 0), T1)
    with pytest.raises(ValueError):
        apply_candidate(S, InsertionCandidate(2, True, 3, 2, 1, 0), T1)


def nested_T1(T1):
    return apply_candidate(new_partial(T1, 1), InsertionCandidate(2, True, 2, 2, 1, 0), T1)


def test_validate_ok_and_makespan(T1, T2):
    S = nested_T1(T1)
    assert validate(S, T1) == []
    assert makespan(S, T1) == 5
    assert makespan(new_partial(T2, 1), T2) == 8


def test_validate_reports_tampering(T1):
    S = nested_T1(T1)
    S.tau[3 - 1] = 0
    found = kinds(validate(S, T1))
    assert ("overlap", (1, 3)) in found
    assert ("delay-mismatch", (2,)) in found
    assert any(k == "order-inconsistency" for k, _ in found)


def test_validate_other_faults(T1):
    S = nested_T1(T1)
    S.cmax = 9
    assert ("cmax-mismatch", (9, 5)) in kinds(validate(S, T1))

    S = nested_T1(T1)
    S.sigma_tasks.append(3)
    assert ("duplicate-task", (3,)) in kinds(validate(S, T1))

    S = new_partial(T1, 1)
    assert validate(S, T1) == []
    assert ("missing-task", (3,)) in kinds(validate(S, T1, complete=True))

    S = nested_T1(T1)
    S.tau -= 1
    assert ("negative-start", (1,)) in kinds(validate(S, T1))

    tau = np.array([0, 4, UNSCHEDULED, UNSCHEDULED], dtype=np.int64)
    assert ("missing-task", (2,)) in kinds(validate(Schedule(tau, [1], 1), T1))


def test_zero_length_tasks_never_overlap():
    inst = Instance.from_triples([(0, 2, 0), (2, 0, 2)])
    S = Schedule(np.array([2, 4, 0, 2]), [3, 1, 4, 2], 4)
    assert validate(S, inst, complete=True) == []
    # a zero-length task strictly inside another breaks the machine order only
    S = Schedule(np.array([1, 3, 0, 2]), [3, 1, 4, 2], 4)
    found = kinds(validate(S, inst, complete=True))
    assert ("order-inconsistency", (3, 1)) in found
    assert not any(k == "overlap" for k, _ in found)


def test_touching_intervals_do_not_overlap(T2):
    tau = np.array([1, 7, 0, 3])
    S = Schedule(tau, [3, 1, 4, 2], 9)
    assert validate(S, T2, complete=True) == []


def test_dump_format_and_parse(T1):
    S = nested_T1(T1)
    text = dump_schedule(S, T1)
    assert text == ("1 1 1 start 0 1\n"
                    "2 3 2 start 1 2\n"
                    "3 4 2 final 3 4\n"
                    "4 2 1 final 4 5\n")
    back = parse_schedule_dump(text, T1)
    assert back.sigma_tasks == S.sigma_tasks and back.starts() == S.starts() and back.cmax == 5


@pytest.mark.parametrize("text", [
    "1 1 1 start 0\n",
    "2 1 1 start 0 1\n",
    "1 9 5 start 0 1\n",
    "1 1 1 final 0 1\n",
])
def test_dump_parse_errors(T1, text):
    with pytest.raises(ValueError):
        parse_schedule_dump(text, T1)
