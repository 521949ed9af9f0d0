"""Regenerates the synthetic demo scene. Output is deterministic."""
import json
import math
import os

HERE = os.path.dirname(os.path.abspath(__file__))
X0, Y0 = 4_321_000.0, 3_210_000.0  # south-west corner of the scene, EPSG:3035


def pt(x, y):
    return [round(X0 + x, 3), round(Y0 + y, 3)]


def ring(coords):
    r = [pt(x, y) for x, y in coords]
    return r + [r[0]]


def collection(features):
    return {"type": "FeatureCollection", "srs": "laea3035", "features": features}


def feature(props, geom):
    return {"type": "Feature", "properties": props, "geometry": geom}


def dump(name, doc):
    with open(os.path.join(HERE, name), "w") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")


# Study region: 8 km x 6 km with a notch cut from the north-east corner.
region = [(0, 0), (8000, 0), (8000, 4200), (6300, 4200), (6300, 6000), (0, 6000)]
dump("region.geojson", collection([feature({"name": "demo"}, {"type": "Polygon", "coordinates": [ring(region)]})]))

villages = [
    feature({"name": "Nordby", "kind": "village"},
            {"type": "Polygon", "coordinates": [ring([(1200, 4300), (1900, 4250), (2050, 4900), (1300, 5050)])]}),
    feature({"name": "Sydhus", "kind": "hamlet"},
            {"type": "Polygon", "coordinates": [ring([(6500, 700), (6800, 700), (6800, 950), (6500, 950)])]}),
]
dump("villages.geojson", collection(villages))


def line(coords):
    return {"type": "LineString", "coordinates": [pt(x, y) for x, y in coords]}


roads = [
    feature({"highway": "primary", "ref": "B12"}, line([(-500, 2600), (2500, 2900), (5200, 2500), (8500, 3100)])),
    feature({"highway": "secondary", "ref": "K7"}, line([(1650, 4600), (2300, 2850)])),
    feature({"highway": "secondary", "ref": "K9"}, line([(5200, 2500), (6650, 820)])),
    feature({"highway": "track", "ref": None}, line([(3000, 600), (3600, 1900), (4300, 2050)])),
]
dump("roads.geojson", collection(roads))

river = [(-300 + 120 * i, 900 + 700 * math.sin(i / 9.0) + 25 * i) for i in range(0, 75)]
dump("river.geojson", collection([feature({"waterway": "river", "name": "Aa"}, line(river))]))

forest_outer = [(4300, 3600), (5900, 3500), (6200, 5200), (5000, 6600), (4100, 5600)]
clearing = [(4900, 4300), (5400, 4300), (5400, 4800), (4900, 4800)]
dump("forest.geojson", collection([feature({"landuse": "forest"}, {
    "type": "Polygon", "coordinates": [ring(forest_outer), ring(clearing)]})]))

dump("railway.geojson", collection([feature({"railway": "rail"}, line([(-200, 6300), (8300, -300)]))]))

# Slope raster on a 50 m lattice shifted by 25 m against the output grid,
# covering the scene with a margin.
dx = 50.0
x_ll, y_ll = X0 - 1025.0, Y0 - 1025.0
nx, ny = 210, 170
rows = []
for r in range(ny):
    yc = y_ll + (ny - r - 0.5) * dx - Y0
    vals = []
    for c in range(nx):
        xc = x_ll + (c + 0.5) * dx - X0
        d2 = (xc - 7000.0) ** 2 + (yc - 5000.0) ** 2
        s = 16.0 * math.exp(-d2 / (1600.0 ** 2)) + 2.0 * math.exp(-((xc - 1000.0) ** 2 + (yc - 1500.0) ** 2) / 800.0 ** 2)
        vals.append(f"{s:.2f}")
    rows.append(" ".join(vals))
with open(os.path.join(HERE, "slope.asc"), "w") as f:
    f.write(f"ncols {nx}\nnrows {ny}\nxllcorner {x_ll}\nyllcorner {y_ll}\ncellsize {dx}\nNODATA_value -9999\n")
    f.write("\n".join(rows) + "\n")
with open(os.path.join(HERE, "slope.asc.meta.json"), "w") as f:
    json.dump({"srs": "laea3035", "units": "deg"}, f, indent=2)
    f.write("\n")
