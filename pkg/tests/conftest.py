import pytest

from asymptospec.nets.generalized import DomainBox, make_delta
from asymptospec.nets.scales import EpsLadder


@pytest.fixture
def short_ladder():
    """Eight rungs from 2**-4 down to 2**-11."""
    return EpsLadder(2.0**-4, 0.5, 8)


@pytest.fixture
def unit_box():
    return DomainBox(-1.0, 1.0)


@pytest.fixture(params=[1, 2, 3])
def delta_power(request):
    return request.param, make_delta(request.param)


@pytest.fixture
def run_out(tmp_path, monkeypatch):
    """Output directory picked up through ASYMPTOSPEC_OUT."""
    outdir = tmp_path / 'runs'
    monkeypatch.setenv('ASYMPTOSPEC_OUT', str(outdir))
    return outdir
