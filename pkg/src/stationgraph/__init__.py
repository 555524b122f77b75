"""Timetable routing on the station graph model with contraction hierarchies."""
from .chquery import backward_corridor, ch_profile_query, ch_time_query
from .connections import (
    ArrivalConnection, Connection, ConnectionSet, dominates, dominates_connection,
    dominates_periodic, link_and_minimum, link_edges, link_time, minimum_connections,
)
from .contraction import ContractionParams, Hierarchy, StoredShortcut, build_hierarchy
from .fileio import load_hierarchy, parse_timetable, print_timetable, save_hierarchy
from .graph import StationGraph, build_station_graph
from .queries import extract_journey, profile_query, time_query, unpack_connection
from .synthetic import SyntheticSpec, generate_synthetic
from .timetable import DAY, Timetable, TimetableBuilder, check_consistency, cycle_difference

__all__ = [
    "ArrivalConnection", "Connection", "ConnectionSet", "ContractionParams", "DAY", "Hierarchy",
    "StationGraph", "StoredShortcut", "SyntheticSpec", "Timetable", "TimetableBuilder",
    "backward_corridor", "build_hierarchy", "build_station_graph", "ch_profile_query",
    "ch_time_query", "check_consistency", "cycle_difference", "dominates", "dominates_connection",
    "dominates_periodic", "extract_journey", "generate_synthetic", "link_and_minimum", "link_edges",
    "link_time", "load_hierarchy", "minimum_connections", "parse_timetable", "print_timetable",
    "profile_query", "save_hierarchy", "time_query", "unpack_connection",
]
