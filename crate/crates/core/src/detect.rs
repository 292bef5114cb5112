//! QAM constellations, channel model, and detectors. (placeholder)
