"""Resource estimation for entanglement sneakernets built on neutral-atom memories."""
