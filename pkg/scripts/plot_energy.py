#!/usr/bin/env python3
"""Overlay energy-vs-time curves from solver energy.csv files.

Usage: plot_energy.py <energy.csv>... --out fig.png [--label NAME]...
"""
import sys

from temax_plots.energy import main

if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
