// Exact rationals over bigint, enough for parsing probe vectors and
// running a small Gaussian elimination.  Values are kept normalized:
// positive denominator, reduced by the gcd.

function absBig(a: bigint): bigint {
  return a < 0n ? -a : a;
}

function gcdBig(a: bigint, b: bigint): bigint {
  a = absBig(a);
  b = absBig(b);
  while (b) {
    [a, b] = [b, a % b];
  }
  return a;
}

export class Rational {
  readonly num: bigint;
  readonly den: bigint;

  constructor(num: bigint, den: bigint = 1n) {
    if (den === 0n) throw new Error("zero denominator");
    if (den < 0n) {
      num = -num;
      den = -den;
    }
    const g = gcdBig(num, den) || 1n;
    this.num = num / g;
    this.den = den / g;
  }

  static parse(s: string): Rational {
    const t = s.trim();
    const slash = t.indexOf("/");
    if (slash < 0) return new Rational(BigInt(t));
    return new Rational(BigInt(t.slice(0, slash)), BigInt(t.slice(slash + 1)));
  }

  static zero = new Rational(0n);

  isZero(): boolean {
    return this.num === 0n;
  }

  add(o: Rational): Rational {
    return new Rational(this.num * o.den + o.num * this.den, this.den * o.den);
  }

  sub(o: Rational): Rational {
    return new Rational(this.num * o.den - o.num * this.den, this.den * o.den);
  }

  mul(o: Rational): Rational {
    return new Rational(this.num * o.num, this.den * o.den);
  }

  div(o: Rational): Rational {
    if (o.num === 0n) throw new Error("division by zero");
    return new Rational(this.num * o.den, this.den * o.num);
  }

  eq(o: Rational): boolean {
    return this.num === o.num && this.den === o.den;
  }

  toString(): string {
    return this.den === 1n ? `${this.num}` : `${this.num}/${this.den}`;
  }
}

/** Rank of a dense rational matrix by fraction-exact elimination. */
export function rank(rows: Rational[][]): number {
  const m = rows.map((r) => r.slice());
  let rk = 0;
  const ncols = m.length ? m[0].length : 0;
  for (let col = 0; col < ncols && rk < m.length; col++) {
    let pivot = -1;
    for (let i = rk; i < m.length; i++) {
      if (!m[i][col].isZero()) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    [m[rk], m[pivot]] = [m[pivot], m[rk]];
    const inv = m[rk][col];
    for (let i = rk + 1; i < m.length; i++) {
      if (m[i][col].isZero()) continue;
      const f = m[i][col].div(inv);
      for (let j = col; j < ncols; j++) {
        m[i][j] = m[i][j].sub(f.mul(m[rk][j]));
      }
    }
    rk++;
  }
  return rk;
}
