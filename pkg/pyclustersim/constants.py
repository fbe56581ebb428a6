from numpy import pi

two_pi = 2 * pi

speed_of_light_m_per_s = 299792458.0
speed_of_light_km_per_ms = speed_of_light_m_per_s / 1e6

# standard gravitational parameter of the Earth, km^3 / s^2
earth_gm_km3_per_s2 = 398600.4418

default_earth_radius_km = 6371.0
