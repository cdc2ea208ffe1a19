"""How far a joule goes under the first-order radio model.

Run with ``python demos/01_radio_budget.py``.
"""

import numpy as np

from priyasim.radio import RadioParams, rx_cost, tx_cost, tx_delay

radio = RadioParams()

# %% cost of one data packet as the link gets longer
distances = np.array([0, 10, 25, 50, 75, 100, 150])
costs = np.array([tx_cost(radio.data_bits, d, radio) for d in distances])
for d, c in zip(distances, costs):
    print(f"{d:>4} m  {c * 1e3:7.4f} mJ")

# the electronics share is fixed, the amplifier share grows with d^2
crossover = np.sqrt(radio.e_elec / radio.eps_amp)
print(f"amplifier cost overtakes electronics beyond {crossover:.1f} m")

# %% packets a fresh 2 J node can send before hitting the 5 % floor
budget = 2.0 * 0.95
for d in (20, 60, 130):
    print(f"{d:>4} m link: {int(budget // tx_cost(radio.data_bits, d, radio)):>6} packets")

# %% relaying: one 100 m hop vs two 50 m hops (transmit + receive at the relay)
direct = tx_cost(radio.data_bits, 100, radio)
relayed = 2 * tx_cost(radio.data_bits, 50, radio) + rx_cost(radio.data_bits, radio)
print(f"direct {direct * 1e3:.3f} mJ, relayed {relayed * 1e3:.3f} mJ")

# %% airtime per packet at 10 kbit/s
print(f"data packet airtime {tx_delay(radio.data_bits, radio):.2f} s, "
      f"control packet {tx_delay(radio.ctrl_bits, radio):.2f} s")
