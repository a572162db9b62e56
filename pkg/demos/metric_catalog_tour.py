"""A tour of the predefined metric catalog.

Run with:  python3 demos/metric_catalog_tour.py
"""

from tensoralg import catalog, is_zero, render
from tensoralg.metricfile import from_entry

print("available charts:")
for name in catalog.list_entries():
    ent = catalog.entry(name)
    frame = "frame" if ent.fri is not None else "no frame"
    print(f"  {name:24s} ({', '.join(ent.coords)}; {ent.signature}; {frame})")

# Each entry can be exported in the metric-definition file format and read
# back; this is what `tensoralg catalog show NAME` prints.
print("\npolar as a metric file:")
print(from_entry(catalog.entry("polar")).render())

# The toroidal chart looks curved but is flat space in disguise.
toroidal = catalog.load("toroidal")
R = toroidal.riemann
flat = all(is_zero(R[h][l][k][j]) for h in range(3) for l in range(3)
           for k in range(3) for j in range(3))
print("toroidal chart has zero Riemann tensor:", flat)

# Frames reproduce their metrics: here the spherical orthonormal triad.
spherical = catalog.load("spherical", frame=True)
print("spherical metric from its frame:",
      [render(spherical.lg[i][i]) for i in range(3)])

# Flat extra dimensions can be appended with either signature.
extended = catalog.load("cartesian2d", extra_flat=(1, "minkowski"))
print("cartesian2d + one Minkowski dimension:",
      [render(extended.lg[i][i]) for i in range(3)],
      "coords:", [c.name for c in extended.coords])

# Schwarzschild again, this time interior: still a vacuum solution.
interior = catalog.load("interiorschwarzschild")
ric = interior.ricci
print("interior Schwarzschild vacuum:",
      all(is_zero(ric[i][j]) for i in range(4) for j in range(4)))
