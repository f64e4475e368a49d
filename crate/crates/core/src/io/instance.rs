use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{parse_field, parse_num, tokens, ParseError};
use crate::label::Variant;
use crate::sndp::{Demand, Edge, SndpInstance};

/// Canonical text form: header, terminals, source, edges, requirements.
pub fn write_instance(inst: &SndpInstance) -> String {
    let mut out = format!(
        "sndp v1 {} nv={} k={}\n",
        inst.variant(),
        inst.vertex_count(),
        inst.k()
    );
    for t in inst.terminals() {
        let _ = writeln!(out, "t {t}");
    }
    if let Some(s) = inst.source() {
        let _ = writeln!(out, "s {s}");
    }
    for e in inst.edges() {
        let _ = writeln!(out, "e {} {} {}", e.u, e.v, e.cost);
    }
    for d in inst.demands() {
        match inst.variant() {
            Variant::General => {
                let _ = writeln!(out, "r {} {} {}", d.u, d.v, d.r);
            }
            Variant::SingleSource => {
                let _ = writeln!(out, "r {} {}", d.v, d.r);
            }
        }
    }
    out
}

/// Parses an instance file. Blank lines and lines starting with `#` are
/// ignored.
pub fn read_instance(text: &str) -> Result<SndpInstance, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let Some((hno, header)) = lines.next() else {
        return Err(ParseError::at(1, 0, "empty file"));
    };
    let ht = tokens(header);
    let mut it = ht.iter().copied();
    match (it.next(), it.next()) {
        (Some((_, "sndp")), Some((_, "v1"))) => {}
        _ => return Err(ParseError::at(hno, 1, "expected header 'sndp v1'")),
    }
    let (vcol, vtext) = it
        .next()
        .ok_or_else(|| ParseError::at(hno, 0, "missing variant"))?;
    let variant: Variant = vtext
        .parse()
        .map_err(|_| ParseError::at(hno, vcol, format!("unknown variant '{vtext}'")))?;
    let nv: usize = parse_field(hno, it.next(), "nv")?;
    let k: u32 = parse_field(hno, it.next(), "k")?;
    if let Some((col, extra)) = it.next() {
        return Err(ParseError::at(hno, col, format!("unexpected '{extra}'")));
    }

    let vertex = |no: usize, tok: (usize, &str)| -> Result<usize, ParseError> {
        let v: usize = parse_num(no, tok, "a vertex")?;
        if v >= nv {
            return Err(ParseError::at(
                no,
                tok.0,
                format!("vertex {v} outside 0..{nv}"),
            ));
        }
        Ok(v)
    };

    let mut terminals = Vec::new();
    let mut terminal_line = BTreeMap::new();
    let mut source: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut edge_line = BTreeMap::new();
    let mut raw_demands: Vec<(usize, Vec<(usize, &str)>)> = Vec::new();
    for (no, line) in lines {
        let t = tokens(line);
        let (kind, args) = (t[0], &t[1..]);
        let arity = |want: &[usize]| -> Result<(), ParseError> {
            if want.contains(&args.len()) {
                Ok(())
            } else {
                Err(ParseError::at(
                    no,
                    0,
                    format!("'{}' line has {} fields", kind.1, args.len()),
                ))
            }
        };
        match kind.1 {
            "t" => {
                arity(&[1])?;
                let v = vertex(no, args[0])?;
                if let Some(prev) = terminal_line.insert(v, no) {
                    return Err(ParseError::at(
                        no,
                        args[0].0,
                        format!("terminal {v} already on line {prev}"),
                    ));
                }
                terminals.push(v);
            }
            "s" => {
                arity(&[1])?;
                if let Some((_, prev)) = source {
                    return Err(ParseError::at(
                        no,
                        0,
                        format!("second source line (first on line {prev})"),
                    ));
                }
                source = Some((vertex(no, args[0])?, no));
            }
            "e" => {
                arity(&[3])?;
                let u = vertex(no, args[0])?;
                let v = vertex(no, args[1])?;
                let cost: f64 = parse_num(no, args[2], "a cost")?;
                if u == v {
                    return Err(ParseError::at(no, args[1].0, "self-loop"));
                }
                if !(cost.is_finite() && cost >= 0.0) {
                    return Err(ParseError::at(
                        no,
                        args[2].0,
                        format!("cost {cost} must be finite and nonnegative"),
                    ));
                }
                if let Some(prev) = edge_line.insert((u.min(v), u.max(v)), no) {
                    return Err(ParseError::at(
                        no,
                        0,
                        format!("duplicate edge {{{u}, {v}}} (first on line {prev})"),
                    ));
                }
                edges.push(Edge { u, v, cost });
            }
            "r" => raw_demands.push((no, args.to_vec())),
            other => {
                return Err(ParseError::at(
                    no,
                    kind.0,
                    format!("unknown line type '{other}'"),
                ));
            }
        }
    }
    if variant == Variant::SingleSource && source.is_none() {
        return Err(ParseError::at(
            hno,
            0,
            "single-source instance has no 's' line",
        ));
    }
    if let (Variant::General, Some((_, line))) = (variant, source) {
        return Err(ParseError::at(line, 0, "'s' line in a general instance"));
    }

    let mut demands = Vec::new();
    let mut demand_line = BTreeMap::new();
    for (no, args) in raw_demands {
        let (u, v, rtok) = match variant {
            Variant::General => {
                if args.len() != 3 {
                    return Err(ParseError::at(no, 0, "expected 'r <u> <v> <req>'"));
                }
                (vertex(no, args[0])?, vertex(no, args[1])?, args[2])
            }
            Variant::SingleSource => {
                if args.len() != 2 {
                    return Err(ParseError::at(no, 0, "expected 'r <t> <req>'"));
                }
                (source.expect("checked").0, vertex(no, args[0])?, args[1])
            }
        };
        let r: u32 = parse_num(no, rtok, "a requirement")?;
        if r > k {
            return Err(ParseError::at(
                no,
                rtok.0,
                format!("requirement {r} exceeds k = {k}"),
            ));
        }
        let ends: &[usize] = match variant {
            Variant::General => &[u, v],
            Variant::SingleSource => &[v],
        };
        for (i, &x) in ends.iter().enumerate() {
            if !terminal_line.contains_key(&x) {
                return Err(ParseError::at(
                    no,
                    args[i].0,
                    format!("requirement endpoint {x} is not a terminal"),
                ));
            }
        }
        if u == v {
            return Err(ParseError::at(
                no,
                0,
                "requirement between a vertex and itself",
            ));
        }
        if let Some(prev) = demand_line.insert((u.min(v), u.max(v)), no) {
            return Err(ParseError::at(
                no,
                0,
                format!("requirement repeats line {prev}"),
            ));
        }
        demands.push(Demand { u, v, r });
    }
    SndpInstance::new(
        variant,
        nv,
        k,
        edges,
        terminals,
        source.map(|s| s.0),
        demands,
    )
    .map_err(|e| ParseError::at(hno, 0, e.to_string()))
}
