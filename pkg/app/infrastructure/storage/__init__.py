from .config_files import config_hash, emit_config, load_config, normalize_config_text, parse_config
from .fields import read_field_csv, write_field_csv
from .tables import frame_to_csv, write_frame
from .trajectories import load_trajectory, save_trajectory
