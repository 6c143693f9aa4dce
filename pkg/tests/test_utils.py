'''Tests of hoflow.utils'''
import numpy as np
import pandas as pd
import pytest

from hoflow.multiplicity import Multiplicity
from hoflow.utils.utils import parse_complex, parse_complex_tuple, parse_real_tuple, parse_multiplicity, format_complex
from hoflow.utils.plotting import ray_plot, ratio_plot

@pytest.mark.parametrize("text, expected", [
    ("1+i", 1 + 1j),
    ("1.5-2i", 1.5 - 2j),
    ("-i", -1j),
    ("i", 1j),
    ("3j", 3j),
    (" 2 ", 2.0),
    ("1e-3+2.5I", 1e-3 + 2.5j),
])
def test_parse_complex(text, expected):
    assert parse_complex(text) == expected

def test_parse_errors():
    with pytest.raises(ValueError):
        parse_complex("1+2k")
    with pytest.raises(ValueError):
        parse_real_tuple("1,,2")
    with pytest.raises(ValueError):
        parse_real_tuple("1, a")

def test_parse_tuples():
    np.testing.assert_array_equal(parse_complex_tuple("(1+2i, 0.5)"), [1 + 2j, 0.5])
    np.testing.assert_array_equal(parse_real_tuple("[0.3, 1.2]"), [0.3, 1.2])
    assert parse_multiplicity("4,1,-1", rank=2) == Multiplicity(4, 1, -1)
    assert parse_multiplicity("4, 3", rank=1) == Multiplicity(4, 0, 3, rank=1)

def test_format_complex():
    assert format_complex(0.5) == "0.5"
    assert format_complex(1 - 2j) == "1-2i"
    assert format_complex(1 / 3 + 1j, digits=3) == "0.333+1i"
    assert parse_complex(format_complex(0.1 - 0.7j, digits=17)) == 0.1 - 0.7j

def test_ray_plot_writes_png(tmp_path):
    t = np.linspace(0.0, 3.0, 10)
    df = pd.DataFrame({"t": t, "value_re": np.cosh(t), "value_im": 0.0})
    out = tmp_path / "ray.png"
    ray_plot(df, out_path=str(out))
    assert out.is_file() and out.stat().st_size > 0
    signed = df.assign(value_re=np.cos(3.0 * t))
    ray_plot(signed, out_path=str(tmp_path / "signed.png"))
    assert (tmp_path / "signed.png").is_file()

def test_ratio_plot(tmp_path):
    df = pd.DataFrame({"t": [0.0, 1.0, 2.0], "ratio": [1.0, 0.6, 0.5]})
    ratio_plot(df, out_path=str(tmp_path / "ratio.png"), reference=0.5)
    assert (tmp_path / "ratio.png").is_file()

def test_empty_frames_are_skipped(tmp_path):
    ray_plot(pd.DataFrame(), out_path=str(tmp_path / "empty.png"))
    ratio_plot(pd.DataFrame({"t": [0.0]}), out_path=str(tmp_path / "none.png"))
    assert not (tmp_path / "empty.png").exists()
    assert not (tmp_path / "none.png").exists()
