"""
Reading and writing data
========================

Trajectories are exchanged as CSV files with one row per sample and
columns `t,x_1..x_n,v_1..v_n`, so that they can be plotted by any
external tool:
```python
>>> from osctorch import io
>>> io.write_trajectory('traj.csv', traj)
>>> traj = io.read_trajectory('traj.csv')
>>> array = io.read_trajectory('traj.csv', numpy=True)
```

Initial states use a small syntax shared with the command line
(`parse_state`): a comma list ('1,0,0,0'), sparse entries
('e:1=4,e:3=-1') or a file path. Power profiles are text files with
one value per node (`read_power_profile`).
"""

from ._trajectory import write_trajectory, read_trajectory, header
from ._parsers import parse_state, read_vector, read_power_profile
