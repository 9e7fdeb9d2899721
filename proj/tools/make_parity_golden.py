#!/usr/bin/env python3
# Copyright 2026 The drc Authors
# SPDX-License-Identifier: Apache-2.0
"""Regenerates the network parity fixtures in tests/data.

An independent PyTorch forward pass over DRCW weights exported by the drc
CLI. Run from the repository root after building:

    python3 tools/make_parity_golden.py --drc build/tools/drc
"""

import argparse
import pathlib
import struct
import subprocess
import tempfile

import numpy as np
import torch
import torch.nn.functional as F

RES = 32
# (k, seed) of every random network in parity.drcd
PARITY_CASES = [(4 + 4 * (i % 3), 100 + i) for i in range(19)] + [(64, 164)]
GOLDEN_K, GOLDEN_SEED = 8, 3


def read_drcw(path):
    data = pathlib.Path(path).read_bytes()
    assert data[:4] == b"DRCW"
    version, slope_bits, count = struct.unpack_from("<III", data, 4)
    assert version == 1
    slope = struct.unpack("<f", struct.pack("<I", slope_bits))[0]
    pos = 16
    tensors = {}
    for _ in range(count):
        (n,) = struct.unpack_from("<H", data, pos)
        pos += 2
        name = data[pos:pos + n].decode()
        pos += n
        rank = data[pos]
        pos += 1
        dims = struct.unpack_from("<%dI" % rank, data, pos)
        pos += 4 * rank
        size = int(np.prod(dims))
        values = np.frombuffer(data, "<f4", size, pos).reshape(dims)
        pos += 4 * size
        tensors[name] = torch.from_numpy(values.astype(np.float64))
    assert pos == len(data)
    return tensors, slope


def forward(t, slope, x):
    def bn_act(y, p):
        y = F.batch_norm(y, t[p + ".running_mean"], t[p + ".running_var"],
                         t[p + ".weight"], t[p + ".bias"], training=False, eps=1e-5)
        return F.leaky_relu(y, slope)

    def conv(y, p):
        return F.conv2d(y, t[p + ".weight"], t[p + ".bias"], padding=t[p + ".weight"].shape[-1] // 2)

    def deconv(y, p):
        return F.conv_transpose2d(y, t[p + ".weight"], t[p + ".bias"], padding=1)

    def encoder(y, p):
        return bn_act(conv(bn_act(conv(y, p + ".conv1"), p + ".bn1"), p + ".conv2"), p + ".bn2")

    def decoder(y, skip, p):
        up = F.interpolate(y, scale_factor=2, mode="bilinear", align_corners=False)
        y = torch.cat([up, skip], dim=1)
        return bn_act(deconv(bn_act(deconv(y, p + ".deconv1"), p + ".bn1"), p + ".deconv2"), p + ".bn2")

    x = x.unsqueeze(0)
    e1 = encoder(x, "enc1")
    e2 = encoder(F.max_pool2d(e1, 2), "enc2")
    e3 = encoder(F.max_pool2d(e2, 2), "enc3")
    b = encoder(F.max_pool2d(e3, 2), "bottleneck")
    d = decoder(b, e3, "dec3")
    d = decoder(d, e2, "dec2")
    d = decoder(d, e1, "dec1")
    h = bn_act(deconv(d, "head.deconv1"), "head.bn1")
    h = bn_act(deconv(h, "head.deconv2"), "head.bn2")
    return F.relu(conv(h, "head.conv"))[0]


def read_drcd(path):
    data = pathlib.Path(path).read_bytes()
    assert data[:4] == b"DRCD"
    version, count, res = struct.unpack_from("<IIH", data, 4)
    assert version == 1 and res == RES
    pos = 14
    out = []
    for _ in range(count):
        (n,) = struct.unpack_from("<I", data, pos)
        pos += 4
        scene_id = data[pos:pos + n].decode()
        pos += n
        px, py, s_r, s_d = struct.unpack_from("<IIff", data, pos)
        pos += 16
        inp = np.frombuffer(data, "<f4", 7 * RES * RES, pos).reshape(7, RES, RES).copy()
        pos += 4 * inp.size
        tgt = np.frombuffer(data, "<f4", 3 * RES * RES, pos).reshape(3, RES, RES).copy()
        pos += 4 * tgt.size
        out.append(dict(scene_id=scene_id, px=px, py=py, s_r=s_r, s_d=s_d, input=inp, target=tgt))
    assert pos == len(data)
    return out


def write_drcd(path, examples):
    parts = [b"DRCD", struct.pack("<IIH", 1, len(examples), RES)]
    for e in examples:
        sid = e["scene_id"].encode()
        parts.append(struct.pack("<I", len(sid)) + sid)
        parts.append(struct.pack("<IIff", e["px"], e["py"], e["s_r"], e["s_d"]))
        parts.append(np.asarray(e["input"], "<f4").tobytes())
        parts.append(np.asarray(e["target"], "<f4").tobytes())
    pathlib.Path(path).write_bytes(b"".join(parts))


def write_pfm(path, chw):
    rgb = np.transpose(chw, (1, 2, 0))[::-1]  # bottom-up scanlines
    header = b"PF\n%d %d\n-1.0\n" % (chw.shape[2], chw.shape[1])
    pathlib.Path(path).write_bytes(header + np.ascontiguousarray(rgb, "<f4").tobytes())


def export_weights(drc, k, seed, path):
    subprocess.run([drc, "weights", "--kind", "random", "--k", str(k), "--seed", str(seed),
                    "--out", str(path)], check=True)
    return read_drcw(path)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--drc", required=True, help="path to the drc executable")
    ap.add_argument("--data", default="tests/data")
    args = ap.parse_args()
    data = pathlib.Path(args.data)
    tmp = pathlib.Path(tempfile.mkdtemp())
    rng = np.random.default_rng(2026)

    examples = []
    for i, (k, seed) in enumerate(PARITY_CASES):
        t, slope = export_weights(args.drc, k, seed, tmp / "w.drcw")
        radiance = rng.uniform(0.0, 3.0, (3, RES, RES))
        normals = rng.uniform(-1.0, 1.0, (3, RES, RES))
        distance = rng.uniform(0.0, 1.0, (1, RES, RES))
        inp = np.concatenate([radiance, normals, distance]).astype(np.float32)
        with torch.no_grad():
            out = forward(t, slope, torch.from_numpy(inp.astype(np.float64))).numpy()
        examples.append(dict(scene_id="parity-k%d-seed%d" % (k, seed), px=k, py=seed,
                             s_r=1.0, s_d=1.0, input=inp, target=out.astype(np.float32)))
    write_drcd(data / "parity.drcd", examples)

    # The stack file comes from the C++ dataset generator; reading and
    # rewriting it here must reproduce it byte for byte.
    stack_path = data / "golden_stack.drcd"
    stack = read_drcd(stack_path)
    write_drcd(tmp / "rewritten.drcd", stack)
    assert (tmp / "rewritten.drcd").read_bytes() == stack_path.read_bytes()

    t, slope = export_weights(args.drc, GOLDEN_K, GOLDEN_SEED, tmp / "w.drcw")
    with torch.no_grad():
        pred = forward(t, slope, torch.from_numpy(stack[0]["input"].astype(np.float64))).numpy()
    write_pfm(data / "golden_pred.pfm", pred.astype(np.float32))


if __name__ == "__main__":
    main()
