#!/usr/bin/env python3
"""Render one snapshot field as a filled-contour image.

Usage: plot_field.py <snapshot.txt> --field Bz --out fig.png
"""
import sys

from temax_plots.field import main

if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
