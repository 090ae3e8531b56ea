//! Timing diagrams with a fast-qubit lane and a slow-drive lane.
//!
//! Widths are schematic: fast rotations are a fixed sliver, free evolution
//! and selective drives grow logarithmically with their angle, drives on a
//! wider base so the three time scales stay visually distinct.

use std::fmt::Write;

use qsynth_core::pulseprog::Branch;
use qsynth_core::{PulseProgram, PulseSegment};

const FAST_WIDTH: f64 = 10.0;
const LANE_S: f64 = 30.0;
const LANE_I: f64 = 80.0;
const MARGIN: f64 = 40.0;

fn width(s: &PulseSegment) -> f64 {
    match *s {
        PulseSegment::FastRotation { .. } => FAST_WIDTH,
        PulseSegment::FreeEvolution { angle } => 24.0 + 8.0 * angle.ln_1p(),
        PulseSegment::SelectiveDrive { angle, .. } => 60.0 + 16.0 * angle.ln_1p(),
    }
}

fn greek(b: Branch) -> &'static str {
    match b {
        Branch::Alpha => "α",
        Branch::Beta => "β",
    }
}

/// Human-readable description of a segment.
pub fn describe(s: &PulseSegment) -> String {
    match *s {
        PulseSegment::FastRotation { axis, angle } => format!(
            "fast rotation angle {angle:.6} about ({:.6}, {:.6}, {:.6})",
            axis[0], axis[1], axis[2]
        ),
        PulseSegment::FreeEvolution { angle } => format!("free evolution angle {angle:.6}"),
        PulseSegment::SelectiveDrive { branch, phase, angle } => {
            format!("selective drive {} phase {phase:.6} angle {angle:.6}", branch.name())
        }
    }
}

/// Segments in time order, as drawn.
fn timeline(program: &PulseProgram) -> impl Iterator<Item = &PulseSegment> {
    program.segments.iter().rev()
}

pub fn svg(program: &PulseProgram) -> String {
    let total: f64 = timeline(program).map(width).sum();
    let w = total + 2.0 * MARGIN;
    let h = 110.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.1}" height="{h:.1}" viewBox="0 0 {w:.1} {h:.1}">"#
    );
    out.push_str(
        "  <style>.fast{fill:#c0392b}.free{fill:#95a5a6}.drive{fill:#2471a3}text{font:12px sans-serif}</style>\n",
    );
    let _ = writeln!(out, r#"  <text x="8" y="{:.1}">S</text>"#, LANE_S + 4.0);
    let _ = writeln!(out, r#"  <text x="8" y="{:.1}">I</text>"#, LANE_I + 4.0);
    for y in [LANE_S, LANE_I] {
        let _ = writeln!(
            out,
            r#"  <line x1="{MARGIN:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="black"/>"#,
            MARGIN + total
        );
    }
    let mut x = MARGIN;
    for (k, s) in timeline(program).enumerate() {
        let sw = width(s);
        let (class, y, height) = match s {
            PulseSegment::FastRotation { .. } => ("fast", LANE_S - 15.0, 15.0),
            PulseSegment::FreeEvolution { .. } => ("free", (LANE_S + LANE_I) / 2.0 - 3.0, 6.0),
            PulseSegment::SelectiveDrive { .. } => ("drive", LANE_I - 15.0, 15.0),
        };
        let _ = writeln!(
            out,
            r#"  <rect class="{class}" data-segment="{k}" x="{x:.1}" y="{y:.1}" width="{sw:.1}" height="{height:.1}"><title>{}</title></rect>"#,
            describe(s)
        );
        x += sw;
    }
    out.push_str("</svg>\n");
    out
}

pub fn ascii(program: &PulseProgram) -> String {
    let mut lane_s = String::from("S ");
    let mut lane_i = String::from("I ");
    let mut legend = String::new();
    for (k, s) in timeline(program).enumerate() {
        let cells = (width(s) / 4.0).round() as usize;
        match s {
            PulseSegment::FastRotation { .. } => {
                lane_s.push('|');
                lane_s.push_str(&"R".repeat(cells.saturating_sub(2).max(1)));
                lane_s.push('|');
                lane_i.push_str(&"-".repeat(cells.max(3)));
            }
            PulseSegment::FreeEvolution { .. } => {
                lane_s.push_str(&"~".repeat(cells));
                lane_i.push_str(&"~".repeat(cells));
            }
            PulseSegment::SelectiveDrive { branch, .. } => {
                lane_s.push_str(&"-".repeat(cells));
                let inner = cells.saturating_sub(3);
                lane_i.push('[');
                lane_i.push_str(greek(*branch));
                lane_i.push_str(&"=".repeat(inner));
                lane_i.push(']');
            }
        }
        let _ = writeln!(legend, "{k:>3}  {}", describe(s));
    }
    format!("{lane_s}\n{lane_i}\n\n{legend}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn demo() -> PulseProgram {
        PulseProgram::new(vec![
            PulseSegment::fast([0.0, 0.0, -1.0], 1.5),
            PulseSegment::FreeEvolution { angle: 2.0 },
            PulseSegment::SelectiveDrive {
                branch: Branch::Alpha,
                phase: 3.0,
                angle: 3.0,
            },
        ])
    }

    #[test]
    fn svg_has_one_element_per_segment() {
        let s = svg(&demo());
        assert_eq!(s.matches("data-segment=").count(), 3);
        let first = s.find(r#"data-segment="0""#).unwrap();
        assert!(s[..first].ends_with(r#"<rect class="drive" "#));
    }

    #[test]
    fn empty_program_draws_lanes() {
        let s = svg(&PulseProgram::default());
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert_eq!(s.matches("data-segment=").count(), 0);
        assert_eq!(s.matches("<line").count(), 2);
    }

    #[test]
    fn ascii_lanes_align() {
        let a = ascii(&demo());
        let lines: Vec<&str> = a.lines().collect();
        assert_eq!(lines[0].chars().count(), lines[1].chars().count());
        assert_eq!(a.lines().filter(|l| l.starts_with("  ")).count(), 3);
    }

    #[test]
    fn widths_order_time_scales() {
        let fast = width(&PulseSegment::fast([1.0, 0.0, 0.0], 3.0));
        let free = width(&PulseSegment::FreeEvolution { angle: 3.0 });
        let drive = width(&PulseSegment::SelectiveDrive {
            branch: Branch::Beta,
            phase: 0.0,
            angle: 3.0,
        });
        assert!(fast < free && free < drive);
    }
}
