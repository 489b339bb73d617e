from typing import Any


SCHEMA_VERSION = 1  # machine output schema

# Member taxonomy, grouped by construction phase (build in this order).
TAXONOMY = {
    "foundation": ("Sill", "BeamPost", "Post"),
    "floor": ("Rim", "Joist", "CenterBeam"),
    "walls": (
        "SolePlate",
        "TopPlate",
        "Stud",
        "GableStud",
        "Header",
        "King",
        "Trimmer",
        "Cripple",
    ),
    "roof": ("Ridge", "Rafter", "Collar", "Lookout", "Purlin"),
}

PHASE_ORDER = ("foundation", "floor", "walls", "roof")

ROOF_TYPES = ("gable", "hip", "gambrel", "shed")

# Standard nominal lumber sections, actual metric sizes in mm (w <= d).
LUMBER_SECTIONS_MM = (
    (38, 89),
    (38, 140),
    (38, 184),
    (38, 235),
    (38, 286),
    (89, 89),
    (140, 140),
)

STANDARD_SPACINGS_M = (0.406, 0.610)

# Categories whose XY projection defines the roof footprint grid.
FOOTPRINT_CATEGORIES = ("Sill", "Rim", "Joist", "CenterBeam", "SolePlate")

# Categories checked for restraint at both ends.
DUAL_END_CATEGORIES = ("Rafter", "Stud")

DEFAULT_VALIDATION: dict[str, Any] = {
    "span_tolerance_tau": 0.03,
    "spacing_standards": STANDARD_SPACINGS_M,
    "spacing_tolerance": 0.05,
    "spacing_exempt_below": 0.1,
    "lumber_set_lambda": LUMBER_SECTIONS_MM,
    "lumber_tol_w": 10.0,
    "lumber_tol_d": 20.0,
    "deflection_load_w": 1900.0,
    "elastic_modulus_e": 12e9,
    "deflection_tolerance_tau_delta": 0.08,
    "grid_cell": 1.0,
    "rafter_margin_mu": 0.3,
    "coverage_min_rho": 0.70,
    "gap_max_gamma": 0.20,
    "cantilever_max_c": 1.5,
    "cantilever_spacing_c_sp": 3.0,
    "elevated_sill_z": 1.0,
    "zone_fraction_alpha": 0.20,
    "zone_tolerance_eps_c": 0.10,
    "min_dualend_height": 0.3,
}

DEFAULT_CONTACT: dict[str, float] = {
    "contact_tolerance_eps": 0.05,
    "ground_height": 0.1,
}

DEFAULT_FIDELITY: dict[str, Any] = {
    "match_tolerance_delta": 0.3,
    "weights": (0.3, 0.4, 0.3),
    "voxel_resolution": 0.1,
    "visual_lambda": 10.0,
    "visual_threshold_tau": 0.6,
    "alpha_cutoff": 0.0,
    "visual_pass_rule": "all_views",
}

SCORING_IMAGE_SIZE = 512

# Camera metadata for the five canonical renders (documentation only):
# azimuth deg, elevation deg, distance multiplier on the bounding diagonal.
VIEW_CONFIGURATIONS = {
    "front": {"azimuth": 0.0, "elevation": 12.0, "distance_multiplier": 1.05},
    "back": {"azimuth": 180.0, "elevation": 12.0, "distance_multiplier": 1.05},
    "left": {"azimuth": 270.0, "elevation": 12.0, "distance_multiplier": 1.05},
    "right": {"azimuth": 90.0, "elevation": 12.0, "distance_multiplier": 1.05},
    "front_right": {
        "azimuth": 45.0,
        "elevation": 18.0,
        "distance_multiplier": 1.10,
    },
}
CAMERA_FOCAL_LENGTH_MM = 32.0

CHECK_NAMES = {
    "T1": ("Load Path", "IRC / Structural"),
    "T2": ("Span Limits", "IRC / Structural"),
    "T3": ("O.C. Spacing", "IRC / Geometric"),
    "T4": ("Std. Dimensions", "Geometric"),
    "T5": ("Deflection L/360", "Physics"),
    "T6": ("Roof Coverage", "Geometric"),
    "T7": ("Gap Detection", "Geometric"),
    "T8": ("Cantilever Limits", "Structural"),
    "T9": ("Stability Score", "Topological"),
    "T10": ("Dual-End Connection", "Structural"),
}

# LoD 350 constructibility requirements and the tests enforcing them.
LOD_350_REQUIREMENTS = {
    "(i) accurate geometry": {
        "tests": ("T4", "T2", "T5"),
        "narrative": (
            "Non-standard cross-sections; spans exceeding IRC limits; "
            "serviceability failure under design load"
        ),
    },
    "(ii) no hard clashes": {
        "tests": ("T7", "T3"),
        "narrative": (
            "Members overlap or leave gaps wider than one stud bay; "
            "framing cannot be physically assembled"
        ),
    },
    "(iii) interface definition": {
        "tests": ("T10", "T6"),
        "narrative": (
            "Rafters/studs free at one end (hinge failure under load); "
            "roof plane incompletely framed"
        ),
    },
    "(iv) load-path integrity": {
        "tests": ("T1", "T9", "T8"),
        "narrative": (
            "Floating members; unsupported elevated sections; "
            "Topological Stability Index < 1.0"
        ),
    },
}

GAP_CELL_REPORT_LIMIT = 20

SPAN_TABLE_ENV_VAR = "FRAMECHECK_SPAN_TABLE"

SCENE_FILE_SUFFIX = ".json"
