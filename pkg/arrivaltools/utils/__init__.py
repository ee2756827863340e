from .conversion import convert_angles, convert_rates, heading_of
from .math import wrap_angle, angular_distance, truncated_normal
