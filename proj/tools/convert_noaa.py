#!/usr/bin/env python3
# Copyright 2026 The EUQ Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Converts NOAA OI SST V2 weekly fields into the engine's SST1/MSK1 files.

Inputs are either the public NetCDF pair (sst.wkmean.1990-present.nc style and
lsmask.nc) or .npy arrays with shapes (T, 180, 360) and (180, 360). Grids are
written latitude-major with longitude varying fastest, southernmost row first,
which matches the NetCDF layout after the latitude flip applied below.

Usage:
  convert_noaa.py --sst sst.wkmean.nc --mask lsmask.nc --out-sst sst.bin --out-mask mask.bin
"""

import argparse
import struct
import sys

import numpy as np


def load_netcdf(path, var_names):
    try:
        from netCDF4 import Dataset  # type: ignore
    except ImportError:
        Dataset = None
    if Dataset is not None:
        ds = Dataset(path)
        for name in var_names:
            if name in ds.variables:
                return np.asarray(ds.variables[name][:])
        raise SystemExit(f"{path}: none of {var_names} present")
    from scipy.io import netcdf_file

    ds = netcdf_file(path, mmap=False)
    for name in var_names:
        if name in ds.variables:
            var = ds.variables[name]
            data = var[:].astype(np.float64)
            scale = getattr(var, "scale_factor", 1.0)
            offset = getattr(var, "add_offset", 0.0)
            return data * scale + offset
    raise SystemExit(f"{path}: none of {var_names} present")


def load_array(path, var_names):
    if path.endswith(".npy"):
        return np.load(path)
    return load_netcdf(path, var_names)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sst", required=True, help="weekly SST NetCDF or .npy (T,180,360)")
    ap.add_argument("--mask", required=True, help="land mask NetCDF or .npy (180,360), 1=ocean")
    ap.add_argument("--out-sst", required=True)
    ap.add_argument("--out-mask", required=True)
    ap.add_argument("--south-up", action="store_true",
                    help="inputs already store the southernmost row first")
    args = ap.parse_args()

    sst = np.squeeze(load_array(args.sst, ["sst"])).astype(np.float64)
    mask = np.squeeze(load_array(args.mask, ["mask", "lsmask"])).astype(np.float64)
    if sst.ndim != 3 or sst.shape[1:] != (180, 360):
        raise SystemExit(f"unexpected SST shape {sst.shape}, want (T, 180, 360)")
    if mask.shape != (180, 360):
        raise SystemExit(f"unexpected mask shape {mask.shape}, want (180, 360)")

    # NOAA grids run north to south; the engine stores south first.
    if not args.south_up:
        sst = sst[:, ::-1, :]
        mask = mask[::-1, :]

    ocean = (mask > 0.5).astype(np.uint8)
    sst = np.where(ocean[None, :, :] == 1, sst, np.nan).astype(np.float32)
    bad = ~np.isfinite(sst[:, ocean == 1])
    if bad.any():
        raise SystemExit(f"{bad.sum()} non-finite ocean values; check mask alignment")

    with open(args.out_mask, "wb") as f:
        f.write(b"MSK1")
        f.write(struct.pack("<II", 180, 360))
        f.write(ocean.tobytes(order="C"))

    with open(args.out_sst, "wb") as f:
        f.write(b"SST1")
        f.write(struct.pack("<III", sst.shape[0], 180, 360))
        f.write(sst.astype("<f4").tobytes(order="C"))

    print(f"wrote {sst.shape[0]} snapshots, {int(ocean.sum())} ocean cells", file=sys.stderr)


if __name__ == "__main__":
    main()
