//! Cycle-accurate processing-element array simulator. (placeholder)
