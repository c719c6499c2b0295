use std::io::{self, Write};

use super::access::MediumAccessOutcome;
use super::sinr::{FadingMode, SinrField};
use super::snapshot::{Role, Snapshot};
use crate::model::{linear_to_db, SystemParams};

pub const SNAPSHOT_CSV_HEADER: &str = "id,x,y,mode,mark,duty_active,cycle_offset,rx_x,rx_y,e,sinr_db";

/// Writes one CSV record per node. Fields that do not apply to a node's mode
/// are left empty, as is `sinr_db` for silent nodes.
pub fn write_snapshot_csv<W: Write>(
    mut out: W,
    s: &Snapshot,
    access: &[MediumAccessOutcome],
    p: &SystemParams,
    fading: FadingMode,
) -> io::Result<()> {
    writeln!(out, "{SNAPSHOT_CSV_HEADER}")?;
    let field = SinrField::new(s, access, p, fading);
    let mut e = vec![None; s.nodes.len()];
    for o in access {
        e[o.node_index] = Some(o.e);
    }
    for (i, n) in s.nodes.iter().enumerate() {
        let (x, y) = n.position;
        match n.role {
            Role::Radar {
                duty_active,
                cycle_offset,
            } => writeln!(out, "{},{x},{y},radar,,{},{cycle_offset},,,,", n.id, u8::from(duty_active))?,
            Role::Comm { mark, rx_position } => {
                let tx = e[i].unwrap_or(false);
                let sinr = if tx { linear_to_db(field.sinr(n)).to_string() } else { String::new() };
                writeln!(
                    out,
                    "{},{x},{y},comm,{mark},,,{},{},{},{sinr}",
                    n.id,
                    rx_position.0,
                    rx_position.1,
                    u8::from(tx)
                )?
            }
        }
    }
    Ok(())
}
