from .plot_network import plot_network
from .plot_profile import plot_rate_profile
from .plot_roc import plot_roc
