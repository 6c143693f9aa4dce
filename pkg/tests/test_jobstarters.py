'''Tests of hoflow.jobstarters'''
import pytest

from hoflow.jobstarters import JobStarter, LocalJobStarter, default_jobstarter, split_list

def square(value: int) -> int:
    return value * value

@pytest.mark.parametrize("cores", [1, 3])
def test_results_keep_item_order(cores):
    items = list(range(17))
    assert LocalJobStarter(max_cores=cores).start(square, items, "square") == [i * i for i in items]

def test_empty_and_single_item():
    jobstarter = LocalJobStarter(max_cores=4)
    assert jobstarter.start(square, [], "empty") == []
    assert jobstarter.start(square, [5], "single") == [25]

def test_max_cores_is_at_least_one():
    assert LocalJobStarter(max_cores=0).max_cores == 1

def test_base_class_is_abstract():
    with pytest.raises(NotImplementedError):
        JobStarter().start(square, [1], "abstract")

def test_default_jobstarter_reads_environment(monkeypatch):
    monkeypatch.setenv("HOFLOW_THREADS", "3")
    assert default_jobstarter().max_cores == 3
    assert default_jobstarter(threads=2).max_cores == 2
    monkeypatch.setenv("HOFLOW_THREADS", "many")
    with pytest.raises(ValueError):
        default_jobstarter()

def test_split_list():
    assert split_list([1, 2, 3, 4, 5, 6], element_length=4) == [[1, 2, 3, 4], [5, 6]]
    assert split_list([1, 2, 3, 4, 5, 6], n_sublists=3) == [[1, 2], [3, 4], [5, 6]]
    assert split_list([{"a": 1}, {"b": 2}], n_sublists=5) == [[{"a": 1}], [{"b": 2}]]
    with pytest.raises(ValueError):
        split_list([1, 2], element_length=1, n_sublists=1)
    with pytest.raises(ValueError):
        split_list([1, 2])

def test_set_max_cores():
    jobstarter = LocalJobStarter(max_cores=1)
    jobstarter.set_max_cores(3)
    assert jobstarter.max_cores == 3
    assert jobstarter.start(square, [2, 3], "square") == [4, 9]
