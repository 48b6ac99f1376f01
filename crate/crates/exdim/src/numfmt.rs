//! Nine-significant-digit printing. Lower endpoints round down and upper
//! endpoints round up, so printed enclosures stay enclosures.

const DIGITS: i32 = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    Nearest,
    Down,
    Up,
}

/// `x` rounded to nine significant digits in the given direction.
pub fn round_sig(x: f64, dir: Round) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    let s = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let mut y: f64 = s.parse().expect("formatted float parses");
    if dir == Round::Nearest {
        return y;
    }
    let exp = x.abs().log10().floor() as i32;
    let step = 10f64.powi(exp - DIGITS + 1);
    for _ in 0..4 {
        let bad = match dir {
            Round::Down => y > x,
            Round::Up => y < x,
            Round::Nearest => false,
        };
        if !bad {
            break;
        }
        let next = match dir {
            Round::Down => y - step,
            _ => y + step,
        };
        y = format!("{:.*e}", (DIGITS - 1) as usize, next).parse().expect("formatted float parses");
    }
    y
}

/// `%.9g`-style text.
pub fn fmt(x: f64, dir: Round) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".to_string() } else { "-inf".to_string() };
    }
    let y = round_sig(x, dir);
    if y == 0.0 {
        return "0".to_string();
    }
    let exp = y.abs().log10().floor() as i32;
    if (-5..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim(format!("{:.*}", decimals, y))
    } else {
        let s = format!("{:.*e}", (DIGITS - 1) as usize, y);
        let (mantissa, e) = s.split_once('e').expect("exponent form");
        let e: i32 = e.parse().expect("exponent");
        format!("{}e{}{:02}", trim(mantissa.to_string()), if e < 0 { '-' } else { '+' }, e.abs())
    }
}

fn trim(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn lo(x: f64) -> String {
    fmt(x, Round::Down)
}

pub fn hi(x: f64) -> String {
    fmt(x, Round::Up)
}

pub fn near(x: f64) -> String {
    fmt(x, Round::Nearest)
}
