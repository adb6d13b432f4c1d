import io as stdio
import pytest
import torch
from ...core.errors import ParseError, UnbalancedPower
from ...dynamics import Trajectory
from .. import (write_trajectory, read_trajectory, header, parse_state,
                read_power_profile)


def _trajectory():
    times = torch.linspace(0, 1, 11, dtype=torch.double)
    x = torch.stack([torch.cos(times), torch.sin(times) / 3], -1)
    v = torch.stack([-torch.sin(times), torch.cos(times) / 3], -1)
    return Trajectory(times, x, v)


def test_header():
    assert header(2) == 't,x_1,x_2,v_1,v_2'


def test_trajectory_roundtrip(tmp_path):
    traj = _trajectory()
    path = tmp_path / 'traj.csv'
    write_trajectory(path, traj)
    text = path.read_bytes().decode()
    assert text.startswith('t,x_1,x_2,v_1,v_2\n'), "header first"
    assert '\r' not in text, "LF line endings"
    back = read_trajectory(path)
    assert torch.allclose(back.times, traj.times, rtol=0, atol=1e-12)
    assert torch.allclose(back.x, traj.x, rtol=0, atol=1e-12)
    assert torch.allclose(back.v, traj.v, rtol=0, atol=1e-12)
    array = read_trajectory(path, numpy=True)
    assert array.shape == (11, 5)


def test_trajectory_to_stream():
    stream = stdio.StringIO()
    write_trajectory(stream, _trajectory())
    lines = stream.getvalue().splitlines()
    assert lines[0] == 't,x_1,x_2,v_1,v_2'
    assert len(lines) == 12
    assert lines[1].split(',')[:2] == ['0', '1']


def test_read_trajectory_errors(tmp_path):
    path = tmp_path / 'bad.csv'
    path.write_text('time,x_1,v_1\n0,1,0\n')
    with pytest.raises(ParseError):
        read_trajectory(path)
    path.write_text('t,x_1,v_1\n0,1\n')
    with pytest.raises(ParseError):
        read_trajectory(path)
    path.write_text('t,x_1,v_1\n0,a,0\n')
    with pytest.raises(ParseError):
        read_trajectory(path)


def test_parse_state():
    assert parse_state('', 3).tolist() == [0., 0., 0.], "empty"
    assert parse_state(None, 2).tolist() == [0., 0.], "none"
    assert parse_state('1,0,-2.5', 3).tolist() == [1., 0., -2.5], "list"
    assert parse_state('e:1=4', 3).tolist() == [4., 0., 0.], "sparse"
    assert parse_state('e:1=4,e:3=-1', 3).tolist() == [4., 0., -1.], \
        "sparse, several entries"


@pytest.mark.parametrize('spec', ['1,2', '1,2,x', 'e:4=1', 'e:0=1', 'e:1',
                                  '1,nan,0'])
def test_parse_state_errors(spec):
    with pytest.raises(ParseError):
        parse_state(spec, 3)


def test_parse_state_file(tmp_path):
    path = tmp_path / 'x0.txt'
    path.write_text('# positions\n1\n0\n0.5\n')
    assert parse_state(str(path), 3).tolist() == [1., 0., 0.5]


def test_power_profile(tmp_path):
    path = tmp_path / 'p.txt'
    path.write_text('-0.5\n-0.2\n1.05\n-0.35\n')
    p = read_power_profile(path, 4)
    assert torch.allclose(p, torch.tensor([-0.5, -0.2, 1.05, -0.35],
                                          dtype=torch.double))
    path.write_text('1\n0\n0\n')
    with pytest.raises(UnbalancedPower):
        read_power_profile(path)
    p = read_power_profile(path, rebalance=True)
    assert abs(p.sum().item()) < 1e-12
    with pytest.raises(ParseError):
        read_power_profile(path, 4)
