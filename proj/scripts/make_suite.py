#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Regenerates the bundled benchmark suite under data/suite/.

Map: a 7x7 city grid. Rows 0 and 6 are 80 km/h avenues (fast, high
emission per km), the other horizontals are 35 km/h streets, verticals
are 45 km/h. Row spacing ~267 m keeps adjacent rows inside the default
300 m POI radius while rows two apart stay outside it.
"""
import json
import os

ROOT = os.path.join(os.path.dirname(__file__), "..", "data", "suite")
COLS = 7
ROWS = 7
LON0, LAT0 = 6.100, 49.600
DLON, DLAT = 0.004, 0.0024  # ~288 m and ~267 m
H_LEN, V_LEN = 288.0, 267.0
AVENUE_SPEED, STREET_SPEED, VERTICAL_SPEED = 80.0, 35.0, 45.0


def node_id(row, col):
    return f"n{row}{col}"


def make_network():
    nodes = [
        {"id": node_id(r, c), "lon": LON0 + c * DLON, "lat": LAT0 + r * DLAT}
        for r in range(ROWS)
        for c in range(COLS)
    ]
    edges = []

    def add(a, b, length, speed):
        edges.append({
            "id": f"{a}-{b}",
            "from": a,
            "to": b,
            "length_m": length,
            "speed_kmh": speed,
        })

    for r in range(ROWS):
        speed = AVENUE_SPEED if r in (0, ROWS - 1) else STREET_SPEED
        for c in range(COLS - 1):
            a, b = node_id(r, c), node_id(r, c + 1)
            add(a, b, H_LEN, speed)
            add(b, a, H_LEN, speed)
    for r in range(ROWS - 1):
        for c in range(COLS):
            a, b = node_id(r, c), node_id(r + 1, c)
            add(a, b, V_LEN, VERTICAL_SPEED)
            add(b, a, V_LEN, VERTICAL_SPEED)
    return {"nodes": nodes, "edges": edges}


def at_node(row, col, dlat=0.0, dlon=0.0):
    return {"lon": LON0 + col * DLON + dlon, "lat": LAT0 + row * DLAT + dlat}


def make_pois():
    pois = [
        # corridor A (rows 0-1)
        {"id": "fuel1", "name": "Avenue Fuel", **at_node(0, 4),
         "tags": {"amenity": "fuel", "brand": "Petrolux"}},
        {"id": "club1", "name": "Nightclub 33", **at_node(0, 3, dlat=-0.0009),
         "tags": {"amenity": "nightclub"}},
        # corridor rows 2 (simple-2)
        {"id": "park2", "name": "Mill Park", **at_node(2, 2),
         "tags": {"leisure": "park"}},
        {"id": "market2", "name": "Grand Bazar", **at_node(2, 5),
         "tags": {"shop": "supermarket"}},
        # corridor row 3/4 (simple-3 waypoint, urgency-3, simple-4, urgency-4)
        {"id": "hosp1", "name": "St. Anna Hospital", **at_node(3, 2),
         "tags": {"amenity": "hospital"}},
        {"id": "pharm1", "name": "Central Pharmacy", **at_node(4, 3),
         "tags": {"amenity": "pharmacy"}},
        {"id": "park4", "name": "Linden Park", **at_node(4, 4),
         "tags": {"leisure": "park"}},
        {"id": "fuel3", "name": "Row Four Fuel", **at_node(4, 2),
         "tags": {"amenity": "fuel"}},
        # corridor D (rows 5-6, simple-1)
        {"id": "park1", "name": "North Park", **at_node(6, 2),
         "tags": {"leisure": "park"}},
        {"id": "market1", "name": "North Market", **at_node(6, 5),
         "tags": {"shop": "supermarket"}},
        # scenery, never queried
        {"id": "cafe1", "name": "Cafe Bruno", **at_node(1, 1, dlat=0.0005),
         "tags": {"amenity": "cafe"}},
        {"id": "cafe2", "name": "Cafe Lila", **at_node(5, 5, dlat=-0.0005),
         "tags": {"amenity": "cafe"}},
        {"id": "cafe3", "name": "Cafe Mondorf", **at_node(3, 6, dlon=0.0008),
         "tags": {"amenity": "cafe"}},
    ]
    return pois


def ctx(time_of_day, traffic, notes=""):
    return {"time_of_day": time_of_day, "traffic": traffic, "notes": notes}


SCENARIOS = [
    # --- efficiency: no tasks, fastest route wins -----------------------
    {"name": "efficiency-1", "family": "EFFICIENCY", "origin": "n10", "destination": "n16",
     "context": ctx("07:45", "LOW", "morning commute")},
    {"name": "efficiency-2", "family": "EFFICIENCY", "origin": "n20", "destination": "n26",
     "preferences": ["keep it smooth"], "context": ctx("13:10", "MEDIUM")},
    {"name": "efficiency-3", "family": "EFFICIENCY", "origin": "n50", "destination": "n56",
     "context": ctx("18:20", "HIGH", "evening rush")},
    {"name": "efficiency-4", "family": "EFFICIENCY", "origin": "n36", "destination": "n30",
     "context": ctx("21:00", "LOW")},

    # --- avoidance: a NODE or TAG rule knocks out the fast route --------
    {"name": "avoidance-1", "family": "AVOIDANCE", "origin": "n10", "destination": "n16",
     "avoid": [{"kind": "NODE", "value": "n03"}],
     "context": ctx("08:30", "MEDIUM", "construction at n03")},
    {"name": "avoidance-2", "family": "AVOIDANCE", "origin": "n20", "destination": "n26",
     "avoid": [{"kind": "NODE", "value": "n02"}],
     "context": ctx("12:00", "LOW", "street market on the avenue")},
    {"name": "avoidance-3", "family": "AVOIDANCE", "origin": "n50", "destination": "n56",
     "avoid": [{"kind": "NODE", "value": "n63"}],
     "context": ctx("17:40", "HIGH")},
    {"name": "avoidance-4", "family": "AVOIDANCE", "origin": "n12", "destination": "n16",
     "avoid": [{"kind": "TAG", "value": "amenity=nightclub"}],
     "context": ctx("23:30", "LOW", "steer clear of the club crowds")},

    # --- urgency: an URGENT task forces the nearest matching POI --------
    {"name": "urgency-1", "family": "URGENCY", "origin": "n10", "destination": "n16",
     "tasks": ["I'm running out of gas"],
     "context": ctx("09:05", "MEDIUM")},
    {"name": "urgency-2", "family": "URGENCY", "origin": "n20", "destination": "n26",
     "tasks": ["I urgently need to refuel the car"],
     "context": ctx("16:15", "HIGH")},
    {"name": "urgency-3", "family": "URGENCY", "origin": "n30", "destination": "n36",
     "tasks": ["This is an emergency, get me to a hospital"],
     "context": ctx("03:20", "LOW")},
    {"name": "urgency-4", "family": "URGENCY", "origin": "n40", "destination": "n46",
     "tasks": ["My tank is almost empty, find a gas station"],
     "context": ctx("11:50", "MEDIUM")},

    # --- simple: NORMAL errands ------------------------------------------
    {"name": "simple-1", "family": "SIMPLE", "origin": "n50", "destination": "n56",
     "tasks": ["I want to pass through a park on the way to the supermarket"],
     "preferences": ["a calm drive would be nice"],
     "context": ctx("10:30", "LOW")},
    {"name": "simple-2", "family": "SIMPLE", "origin": "n20", "destination": "n26",
     "tasks": ["pass through a park", "stop at the supermarket"],
     "context": ctx("15:00", "MEDIUM")},
    {"name": "simple-3", "family": "SIMPLE", "origin": "n30", "destination": "n36",
     "tasks": ["pick up my prescription at a pharmacy"],
     "context": ctx("14:05", "LOW")},
    {"name": "simple-4", "family": "SIMPLE", "origin": "n40", "destination": "n46",
     "tasks": ["drive past a park please"],
     "preferences": ["scenic if possible"],
     "context": ctx("19:45", "LOW")},
]


def main():
    os.makedirs(os.path.join(ROOT, "scenarios"), exist_ok=True)
    with open(os.path.join(ROOT, "network.json"), "w") as f:
        json.dump(make_network(), f, indent=1)
        f.write("\n")
    with open(os.path.join(ROOT, "pois.json"), "w") as f:
        json.dump(make_pois(), f, indent=1)
        f.write("\n")
    for spec in SCENARIOS:
        spec = {"repetitions": 3, "k": 2, "tasks": [], "preferences": [], "avoid": [], **spec}
        path = os.path.join(ROOT, "scenarios", spec["name"] + ".json")
        with open(path, "w") as f:
            json.dump(spec, f, indent=1)
            f.write("\n")
    print(f"wrote suite to {os.path.abspath(ROOT)}")


if __name__ == "__main__":
    main()
