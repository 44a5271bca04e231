//! GF(2^8) arithmetic and systematic Reed-Solomon encoding as used by QR codes.

/// Field polynomial x^8 + x^4 + x^3 + x^2 + 1.
pub const FIELD_POLY: u16 = 0x11d;

struct Tables {
    exp: [u8; 512],
    log: [u8; 256],
}

const fn build_tables() -> Tables {
    let mut exp = [0u8; 512];
    let mut log = [0u8; 256];
    let mut x: u16 = 1;
    let mut i = 0;
    while i < 255 {
        exp[i] = x as u8;
        log[x as usize] = i as u8;
        x <<= 1;
        if x & 0x100 != 0 {
            x ^= FIELD_POLY;
        }
        i += 1;
    }
    while i < 512 {
        exp[i] = exp[i - 255];
        i += 1;
    }
    Tables { exp, log }
}

static TABLES: Tables = build_tables();

/// α^power with α = 2.
pub fn exp(power: usize) -> u8 {
    TABLES.exp[power % 255]
}

pub fn mul(a: u8, b: u8) -> u8 {
    if a == 0 || b == 0 {
        return 0;
    }
    TABLES.exp[TABLES.log[a as usize] as usize + TABLES.log[b as usize] as usize]
}

/// Generator polynomial ∏_{i<degree} (x − α^i), highest-degree coefficient first
/// with the leading 1 omitted.
pub fn generator(degree: usize) -> Vec<u8> {
    let mut poly = vec![0u8; degree];
    if degree == 0 {
        return poly;
    }
    poly[degree - 1] = 1;
    let mut root = 1u8;
    for _ in 0..degree {
        for j in 0..degree {
            poly[j] = mul(poly[j], root);
            if j + 1 < degree {
                poly[j] ^= poly[j + 1];
            }
        }
        root = mul(root, 2);
    }
    poly
}

/// A systematic Reed-Solomon codeword: data bytes followed by parity bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codeword {
    pub data: Vec<u8>,
    pub ecc: Vec<u8>,
}

impl Codeword {
    pub fn bytes(&self) -> Vec<u8> {
        let mut out = self.data.clone();
        out.extend_from_slice(&self.ecc);
        out
    }

    pub fn syndromes(&self) -> Vec<u8> {
        syndromes(&self.bytes(), self.ecc.len())
    }
}

/// Appends `ecc_len` parity bytes to `data`.
pub fn rs_encode(data: &[u8], ecc_len: usize) -> Codeword {
    let gen = generator(ecc_len);
    let mut rem = vec![0u8; ecc_len];
    for &b in data {
        let factor = b ^ rem.first().copied().unwrap_or(0);
        rem.rotate_left(1);
        if let Some(last) = rem.last_mut() {
            *last = 0;
        }
        for (r, &g) in rem.iter_mut().zip(&gen) {
            *r ^= mul(g, factor);
        }
    }
    Codeword {
        data: data.to_vec(),
        ecc: rem,
    }
}

/// Evaluates the codeword polynomial (first byte = highest degree) at α^0..α^(count-1).
pub fn syndromes(codeword: &[u8], count: usize) -> Vec<u8> {
    (0..count)
        .map(|i| {
            let x = exp(i);
            codeword.iter().fold(0u8, |acc, &c| mul(acc, x) ^ c)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slow_mul(mut a: u8, mut b: u8) -> u8 {
        let mut acc = 0u8;
        while b != 0 {
            if b & 1 != 0 {
                acc ^= a;
            }
            let carry = a & 0x80 != 0;
            a <<= 1;
            if carry {
                a ^= (FIELD_POLY & 0xff) as u8;
            }
            b >>= 1;
        }
        acc
    }

    #[test]
    fn alpha_has_order_255() {
        let mut x = 1u8;
        for k in 1..=255 {
            x = slow_mul(x, 2);
            if k < 255 {
                assert_ne!(x, 1, "alpha^{k} = 1 too early");
            }
        }
        assert_eq!(x, 1);
        assert_eq!(exp(255), 1);
    }

    #[test]
    fn table_mul_matches_shift_and_add() {
        for a in 0..=255u8 {
            for b in (0..=255u8).step_by(7) {
                assert_eq!(mul(a, b), slow_mul(a, b));
            }
        }
    }

    #[test]
    fn generator_degree_7_known_coefficients() {
        // x^7 + 127x^6 + 122x^5 + 154x^4 + 164x^3 + 11x^2 + 68x + 117
        assert_eq!(generator(7), vec![127, 122, 154, 164, 11, 68, 117]);
    }

    #[test]
    fn encoded_codeword_has_zero_syndromes() {
        let cw = rs_encode(b"hello world, cue balls", 15);
        assert_eq!(cw.ecc.len(), 15);
        assert!(cw.syndromes().iter().all(|&s| s == 0));
    }

    #[test]
    fn corruption_is_detected() {
        let cw = rs_encode(&[0x40, 0x36, 0x57, 0x26, 0x40, 0xec], 15);
        let mut bytes = cw.bytes();
        bytes[3] ^= 0x01;
        assert!(syndromes(&bytes, 15).iter().any(|&s| s != 0));
    }
}
