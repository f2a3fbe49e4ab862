//! File formats: point and layering CSV, SVG drawings, configuration files
//! and the companion CSVs of experiment reports.

mod config;
mod points;
mod reports;
mod svg;

pub use config::{
    density_from_key_values, parse_density_config, parse_key_values, parse_schedule, KeyValues, DENSITY_KEYS,
    MAX_SCHEDULE_LEN,
};
pub use points::{
    num, parse_layering_csv, parse_points_csv, read_points_csv, write_layering_csv, write_points_csv, write_rows,
};
pub use reports::*;
pub use svg::{layering_svg, svg_layer_selection, SvgStyle};
