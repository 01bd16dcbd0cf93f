#!/usr/bin/env python3
"""Step-by-step hand computation of fixture trip F1.

Reads nothing from the engine; every value is recomputed from the raw inputs
in data/fixtures/f1 with plain formulas and printed as key=value lines. The
output is committed as data/fixtures/f1/expected.txt and frozen into the C++
pipeline tests.
"""
import math

R = 3958.8
CIRCUITY, SPEED = 1.2, 45.0
RATE, VSL, G_RATE, A_RATE = 0.655, 12.5e6, 1.2e-8, 1e-10
LN_A, B = math.log(10.0), -0.5
BLOCK = (0.5, 0.002, 0.0)
MIN_BLOCK = 0.25
DEP, ARR = 0.5, 0.25

origin = (36.1627, -86.7816, 28.5)
dest = (35.1495, -90.049, 33.1)
hubs = {"BNA": (36.1245, -86.6782), "MEM": (35.0424, -89.9767)}


def hav(p, q):
    f1, f2 = math.radians(p[0]), math.radians(q[0])
    dl = math.radians(q[1] - p[1])
    h = math.sin((f2 - f1) / 2) ** 2 + math.cos(f1) * math.cos(f2) * math.sin(dl / 2) ** 2
    return 2 * R * math.asin(math.sqrt(h))


def nearest(p):
    return min(sorted(hubs), key=lambda c: hav(p, hubs[c]))


out = {}
out["od_great_circle_mi"] = hav(origin, dest)
out["ground_distance_mi"] = CIRCUITY * out["od_great_circle_mi"]
out["ground_time_h"] = out["ground_distance_mi"] / SPEED
oh, dh = nearest(origin), nearest(dest)
out["origin_hub"], out["dest_hub"] = oh, dh
out["origin_leg_mi"] = CIRCUITY * hav(origin, hubs[oh])
out["origin_leg_h"] = out["origin_leg_mi"] / SPEED
out["dest_leg_mi"] = CIRCUITY * hav(hubs[dh], dest)
out["dest_leg_h"] = out["dest_leg_mi"] / SPEED
air = hav(hubs[oh], hubs[dh])
out["air_distance_mi"] = air
out["wage_usd_per_h"] = (origin[2] + dest[2]) / 2
W = out["wage_usd_per_h"]

out["ground_cost_usd"] = RATE * out["ground_distance_mi"]
out["ground_risk_usd"] = VSL * G_RATE * out["ground_distance_mi"]
out["gct_ground_usd"] = -(out["ground_cost_usd"] + W * out["ground_time_h"] + out["ground_risk_usd"])

fare = math.exp(LN_A) * air ** B * air
block = max(BLOCK[0] + BLOCK[1] * air + BLOCK[2] * air * air, MIN_BLOCK)
access_mi = out["origin_leg_mi"] + out["dest_leg_mi"]
access_h = out["origin_leg_h"] + out["dest_leg_h"]
out["fare_usd"] = fare
out["block_h"] = block
out["aam_cost_usd"] = RATE * access_mi + fare
out["aam_time_h"] = access_h + DEP + block + ARR
out["aam_risk_usd"] = VSL * G_RATE * access_mi + VSL * A_RATE * air
out["gct_aam_usd"] = -(out["aam_cost_usd"] + W * out["aam_time_h"] + out["aam_risk_usd"])
out["gct_air_segment_usd"] = -(fare + W * (DEP + block + ARR) + VSL * A_RATE * air)
out["gct_access_segment_usd"] = -(RATE * access_mi + W * access_h + VSL * G_RATE * access_mi)
out["p_aam"] = 1.0 / (1.0 + math.exp(out["gct_ground_usd"] - out["gct_aam_usd"]))
out["p_aam_scale_0.05"] = 1.0 / (1.0 + math.exp(0.05 * (out["gct_ground_usd"] - out["gct_aam_usd"])))
out["air_share"] = out["gct_air_segment_usd"] / out["gct_aam_usd"]
out["range_class"] = "UAM" if air < 150 * 0.621371 else ("RAM" if air <= 800 * 0.621371 else "OUT_OF_RANGE")
out["chosen"] = "AAM" if out["p_aam"] > 0.5 else "GROUND"

for k, v in out.items():
    print(f"{k}={v!r}" if isinstance(v, float) else f"{k}={v}")
