#!/usr/bin/env python3
"""Convert public graph benchmarks into the mvge dataset directory format.

Supported inputs:

  planetoid   Cora / Citeseer / Pubmed raw files (ind.<name>.{x,tx,allx,y,ty,ally,graph,test.index})
              as distributed with the Planetoid and GCN repositories.
  geom-gcn    Texas / Wisconsin / Cornell / Chameleon / Squirrel / Actor directories holding
              out1_graph_edges.txt and out1_node_feature_label.txt.

Output directory layout: edges.tsv, features.csv, labels.txt, meta.json.

    python tools/convert_dataset.py planetoid --name cora --raw path/to/planetoid/data --out data/cora
    python tools/convert_dataset.py geom-gcn --name wisconsin --raw path/to/new_data/wisconsin --out data/wisconsin

Then point the acceptance suite at the parent directory: MVGE_DATA_DIR=data.
"""

import argparse
import json
import pickle
import sys
from pathlib import Path

import numpy as np


def _load_pickle(path):
    with open(path, "rb") as f:
        if sys.version_info > (3, 0):
            return pickle.load(f, encoding="latin1")
        return pickle.load(f)


def load_planetoid(raw: Path, name: str):
    import scipy.sparse as sp

    parts = {k: _load_pickle(raw / f"ind.{name}.{k}") for k in ("x", "y", "tx", "ty", "allx", "ally", "graph")}
    test_idx = [int(line) for line in (raw / f"ind.{name}.test.index").read_text().split()]
    test_sorted = np.sort(test_idx)
    tx, ty = parts["tx"], parts["ty"]
    if name == "citeseer":
        # Some test indices are isolated and missing from tx/ty; pad with zero rows.
        full = range(min(test_idx), max(test_idx) + 1)
        tx_ext = sp.lil_matrix((len(full), tx.shape[1]))
        tx_ext[test_sorted - min(test_sorted), :] = tx
        ty_ext = np.zeros((len(full), ty.shape[1]))
        ty_ext[test_sorted - min(test_sorted), :] = ty
        tx, ty = tx_ext, ty_ext
    features = sp.vstack((parts["allx"], tx)).tolil()
    features[test_idx, :] = features[test_sorted, :]
    labels = np.vstack((parts["ally"], ty))
    labels[test_idx, :] = labels[test_sorted, :]
    n = features.shape[0]
    edges = set()
    for u, nbrs in parts["graph"].items():
        for v in nbrs:
            if u != v and u < n and v < n:
                edges.add((min(u, v), max(u, v)))
    y = labels.argmax(axis=1)
    # Citeseer's padded rows have no label; give them class 0 as common loaders do.
    return n, sorted(edges), np.asarray(features.todense(), dtype=np.float64), y


def load_geom_gcn(raw: Path):
    feats, labels = {}, {}
    with open(raw / "out1_node_feature_label.txt") as f:
        next(f)
        for line in f:
            node, feat, label = line.rstrip("\n").split("\t")
            feats[int(node)] = np.array([float(v) for v in feat.split(",")], dtype=np.float64)
            labels[int(node)] = int(label)
    n = len(feats)
    x = np.stack([feats[i] for i in range(n)])
    y = np.array([labels[i] for i in range(n)])
    edges = set()
    with open(raw / "out1_graph_edges.txt") as f:
        next(f)
        for line in f:
            u, v = (int(t) for t in line.split())
            if u != v:
                edges.add((min(u, v), max(u, v)))
    return n, sorted(edges), x, y


def write_dataset(out: Path, name: str, n, edges, x, y):
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "edges.tsv", "w") as f:
        f.write(f"# {name}: {len(edges)} undirected edges\n")
        for u, v in edges:
            f.write(f"{u}\t{v}\n")
    np.savetxt(out / "features.csv", x, delimiter=",", fmt="%.17g")
    np.savetxt(out / "labels.txt", y, fmt="%d")
    meta = {
        "name": name,
        "num_nodes": int(n),
        "num_features": int(x.shape[1]),
        "num_classes": int(y.max()) + 1,
    }
    (out / "meta.json").write_text(json.dumps(meta, indent=2) + "\n")
    print(f"{name}: {n} nodes, {len(edges)} edges, {x.shape[1]} features, {meta['num_classes']} classes -> {out}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("format", choices=["planetoid", "geom-gcn"])
    ap.add_argument("--name", required=True, help="dataset name, e.g. cora or wisconsin")
    ap.add_argument("--raw", required=True, type=Path, help="directory with the raw files")
    ap.add_argument("--out", required=True, type=Path, help="output dataset directory")
    args = ap.parse_args(argv)
    name = args.name.lower()
    if args.format == "planetoid":
        n, edges, x, y = load_planetoid(args.raw, name)
    else:
        n, edges, x, y = load_geom_gcn(args.raw)
    write_dataset(args.out, name, n, edges, x, y)


if __name__ == "__main__":
    main()
