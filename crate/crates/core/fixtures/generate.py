#!/usr/bin/env python3
"""Regenerate the synthetic test-log fixtures in this directory.

Deterministic: running it twice yields identical files.

    python3 crates/core/fixtures/generate.py
"""

import math
import os

HERE = os.path.dirname(os.path.abspath(__file__))
TRIAL_HEADER = "time_s,force_N,displacement_mm,pressure_kPa"
DT = 0.1  # s, at 1 mm/s approach speed

# scenario -> [(angle_deg, mean adaptation force in N or None if it never attaches, attached reps)]
# Ultimate-angle rows and the forces quoted in the results text are the
# reported values; the remaining rows are plausible fill-ins.
SCENARIOS = {
    "20mm Granular": [(15, 0.41, 4), (30, 0.48, 4), (45, 0.45, 4), (60, 0.40, 4), (75, 0.36, 4), (85, 0.33, 3), (90, None, 0)],
    "10mm Granular": [(15, 0.52, 4), (30, 0.61, 4), (45, 0.69, 4), (60, 0.58, 4), (75, 0.49, 4), (80, 0.43, 4), (90, None, 0)],
    "5mm Granular": [(15, 0.51, 4), (30, 0.92, 4), (45, 1.31, 4), (55, 1.17, 4), (60, None, 0), (75, None, 0)],
    "Ecoflex 00-10": [(15, 0.51, 4), (30, 0.83, 4), (45, 1.15, 4), (60, 1.12, 4), (70, 1.09, 4), (75, None, 0)],
    "Dragonskin 10": [(15, 1.62, 4), (30, 3.05, 4), (45, 4.96, 4), (60, None, 0), (75, None, 0)],
    "Ecoflex 00-10 suction pad": [(15, 0.36, 4), (30, 0.73, 4), (45, 0.69, 4), (60, None, 0)],
}

# per-repetition offsets around the mean; each list sums to zero
OFFSETS = {4: [-0.02, 0.01, 0.02, -0.01], 3: [-0.01, 0.0, 0.01]}

# name, stalk length (mm), force at 5 mm tip deflection (N), pressure (kPa)
BENDING = [
    ("granular_20mm_60kpa", 20, 1.02, -60.0),
    ("granular_10mm_60kpa", 10, 2.74, -60.0),
    ("granular_5mm_60kpa", 5, 2.91, -60.0),
    ("ecoflex_stalk", 20, 0.51, -60.0),
    ("dragonskin_stalk", 20, 1.64, -60.0),
]


def slug(s):
    return s.lower().replace(" ", "_").replace("-", "")


def wiggle(i):
    return 0.15 * math.sin(1.7 * i)


def adaptation_trial(peak, attaches, rep):
    """Approach ramp, force peak, attachment pressure drop, post-attachment load."""
    k_peak = 14 + 2 * rep
    k_att = k_peak + 6
    n = k_att + 10
    rows = []
    for i in range(n):
        if i <= k_peak:
            f = peak * math.sin(0.5 * math.pi * i / k_peak)
        elif not attaches or i <= k_att:
            # stalk wrinkles after the peak and the force sags
            f = peak * (1.0 - 0.08 * (i - k_peak) / 6.0)
        else:
            f = peak + 1.5  # surface weight after attachment
        if attaches and i >= k_att - 3:
            p = [-20.0, -35.0, -48.0, -52.0, -57.0, -59.5][min(i - (k_att - 3), 5)]
            if i > k_att + 2:
                p = -60.0 + 0.1 * wiggle(i)
        else:
            p = -8.0 + wiggle(i)
        force = "%.4f" % peak if i == k_peak else "%.4f" % f
        rows.append("%.1f,%s,%.2f,%.2f" % (i * DT, force, i * DT, p))
    return "\n".join([TRIAL_HEADER] + rows) + "\n"


def write(path, text):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def adaptation():
    manifest = ["file,scenario,angle_deg"]
    for scenario, rows in SCENARIOS.items():
        for angle, mean, attached in rows:
            offsets = OFFSETS.get(attached, [])
            for rep in range(4):
                attaches = rep < attached
                peak = round(mean + offsets[rep], 4) if attaches else 0.25 + 0.05 * rep
                name = "trials/%s_%02ddeg_r%d.csv" % (slug(scenario), angle, rep + 1)
                write(os.path.join(HERE, "adaptation", name), adaptation_trial(peak, attaches, rep))
                manifest.append("%s,%s,%d" % (name, scenario, angle))
    write(os.path.join(HERE, "adaptation", "manifest.csv"), "\n".join(manifest) + "\n")


def bending():
    # exact line F = 204 N/m * deflection
    rows = ["deflection_mm,force_N"] + ["%.1f,%.3f" % (0.5 * j, 0.102 * j) for j in range(1, 11)]
    write(os.path.join(HERE, "bending", "bending_20mm.csv"), "\n".join(rows) + "\n")

    for name, length, f5, pressure in BENDING:
        step = 0.12  # mm per sample, so 5 mm falls between samples
        rows = ["# stalk_length_mm=%d" % length, TRIAL_HEADER]
        for i in range(43):
            d = i * step
            x = d / 5.0
            f = f5 * (0.8 * x + 0.2 * x * x)
            rows.append("%.2f,%.4f,%.2f,%.2f" % (i * step, f, d, pressure + 0.1 * wiggle(i)))
        write(os.path.join(HERE, "bending", name + ".csv"), "\n".join(rows) + "\n")


def traces():
    p = [-8.0, -8.1, -7.9, -8.0, -8.2, -20.0, -40.0, -55.0, -60.0, -60.1, -59.9]
    f = [0.0, 0.08, 0.17, 0.26, 0.35, 0.42, 0.46, 0.48, 1.9, 2.0, 2.0]
    rows = ["%.1f,%.2f,%.1f,%.1f" % (i * DT, f[i], i * DT, p[i]) for i in range(len(p))]
    write(os.path.join(HERE, "traces", "attach_ramp.csv"), "\n".join([TRIAL_HEADER] + rows) + "\n")

    rows = ["%.1f,%.2f,%.1f,%.1f" % (i * DT, min(0.05 * i, 0.4), i * DT, -8.0) for i in range(12)]
    write(os.path.join(HERE, "traces", "self_jamming_only.csv"), "\n".join([TRIAL_HEADER] + rows) + "\n")


if __name__ == "__main__":
    adaptation()
    bending()
    traces()
