//! Raw national-accounts series for one country and the model variables
//! built from them.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::series::{ensure_aligned, AnnualSeries};

/// Column names of the raw inputs, in the order used by [`CountrySeries::new`].
pub const RAW_COLUMNS: [&str; 11] = [
    "gdp_current",
    "net_taxes",
    "gdp_deflator",
    "compensation",
    "employees",
    "self_employed",
    "unemployed",
    "net_capital_stock",
    "consumption_fixed_capital",
    "investment_deflator",
    "gross_capital_formation",
];

/// Aligned annual raw series for one country.
#[derive(Debug, Clone, PartialEq)]
pub struct CountrySeries {
    pub country: String,
    /// GDP at current prices.
    pub gdp_current: AnnualSeries,
    /// Taxes less subsidies on production and imports, current prices.
    pub net_taxes: AnnualSeries,
    pub gdp_deflator: AnnualSeries,
    /// Compensation of employees, current prices.
    pub compensation: AnnualSeries,
    pub employees: AnnualSeries,
    pub self_employed: AnnualSeries,
    pub unemployed: AnnualSeries,
    /// Net capital stock at constant prices.
    pub net_capital_stock: AnnualSeries,
    /// Consumption of fixed capital, current prices.
    pub consumption_fixed_capital: AnnualSeries,
    /// Deflator of gross fixed capital formation.
    pub investment_deflator: AnnualSeries,
    /// Gross capital formation, current prices.
    pub gross_capital_formation: AnnualSeries,
}

fn require(s: &AnnualSeries, ok: impl Fn(f64) -> bool) -> Result<()> {
    match s.values().iter().position(|&v| !ok(v)) {
        Some(i) => Err(Error::NonPositiveValue {
            label: s.label().into(),
            year: s.start_year() + i as i32,
            value: s.values()[i],
        }),
        None => Ok(()),
    }
}

impl CountrySeries {
    /// Builds and validates a country from series ordered as [`RAW_COLUMNS`].
    pub fn new(country: impl Into<String>, series: [AnnualSeries; 11]) -> Result<Self> {
        let [gdp_current, net_taxes, gdp_deflator, compensation, employees, self_employed, unemployed, net_capital_stock, consumption_fixed_capital, investment_deflator, gross_capital_formation] =
            series;
        let c = Self {
            country: country.into(),
            gdp_current,
            net_taxes,
            gdp_deflator,
            compensation,
            employees,
            self_employed,
            unemployed,
            net_capital_stock,
            consumption_fixed_capital,
            investment_deflator,
            gross_capital_formation,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn columns(&self) -> [&AnnualSeries; 11] {
        [
            &self.gdp_current,
            &self.net_taxes,
            &self.gdp_deflator,
            &self.compensation,
            &self.employees,
            &self.self_employed,
            &self.unemployed,
            &self.net_capital_stock,
            &self.consumption_fixed_capital,
            &self.investment_deflator,
            &self.gross_capital_formation,
        ]
    }

    /// Checks alignment, positive headcounts and positive price levels.
    pub fn validate(&self) -> Result<()> {
        let cols = self.columns();
        for c in &cols[1..] {
            ensure_aligned(cols[0], c)?;
        }
        require(&self.employees, |v| v > 0.0)?;
        require(&self.self_employed, |v| v >= 0.0)?;
        require(&self.unemployed, |v| v >= 0.0)?;
        require(&self.gdp_deflator, |v| v > 0.0)?;
        require(&self.investment_deflator, |v| v > 0.0)?;
        Ok(())
    }

    pub fn start_year(&self) -> i32 {
        self.gdp_current.start_year()
    }

    pub fn end_year(&self) -> i32 {
        self.gdp_current.end_year()
    }

    pub fn len(&self) -> usize {
        self.gdp_current.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gdp_current.is_empty()
    }

    /// Restricts every series to `first..=last`, clipped to the data.
    pub fn window(&self, first: i32, last: i32) -> Result<Self> {
        let (first, last) = (first.max(self.start_year()), last.min(self.end_year()));
        if first > last {
            return Err(Error::EmptyWindow { first, last });
        }
        let cols = self.columns();
        let mut out = Vec::with_capacity(11);
        for c in cols {
            out.push(c.window(first, last)?);
        }
        let arr: [AnnualSeries; 11] = out
            .try_into()
            .map_err(|_| Error::InvalidArgument("column count".into()))?;
        Self::new(self.country.clone(), arr)
    }
}

/// Deflator applied to gross capital formation before forming `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KDeflator {
    #[default]
    Gdp,
    Investment,
}

/// Model variables, one value per year.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedSeries {
    pub country: String,
    /// Real output at factor cost.
    pub y: AnnualSeries,
    /// Real wage bill including imputed self-employed income.
    pub w_bill: AnnualSeries,
    /// Total employment.
    pub l: AnnualSeries,
    /// Labor force.
    pub n: AnnualSeries,
    pub omega: AnnualSeries,
    pub lambda: AnnualSeries,
    pub wage_rate: AnnualSeries,
    pub productivity: AnnualSeries,
    pub nu: AnnualSeries,
    pub delta: AnnualSeries,
    pub k_rate: AnnualSeries,
    /// Return on capital; reported only.
    pub r: AnnualSeries,
}

impl DerivedSeries {
    pub fn start_year(&self) -> i32 {
        self.omega.start_year()
    }

    pub fn end_year(&self) -> i32 {
        self.omega.end_year()
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }
}

/// Builds the model variables:
///
/// ```text
/// Y = (gdp − taxes) / P          W = (1 + self_employed/employees) · comp / P
/// L = employees + self_employed  N = L + unemployed
/// ω = W/Y   λ = L/N   w = W/L   a = Y/L   ν = K/Y
/// δ = cfc / (P_I · K)            k = (gcf / P_k) / (Y − W)      r = (Y − W)/K
/// ```
pub fn derive(raw: &CountrySeries, k_deflator: KDeflator) -> Result<DerivedSeries> {
    raw.validate()?;
    let n = raw.len();
    let start = raw.start_year();
    let at = |s: &AnnualSeries, i: usize| s.values()[i];
    let mut cols: [Vec<f64>; 12] = Default::default();
    for i in 0..n {
        let year = start + i as i32;
        let p = at(&raw.gdp_deflator, i);
        let emp = at(&raw.employees, i);
        let se = at(&raw.self_employed, i);
        let y = (at(&raw.gdp_current, i) - at(&raw.net_taxes, i)) / p;
        if !(y > 0.0) {
            return Err(Error::DivisionDomain {
                quantity: "output",
                year,
            });
        }
        let w = (1.0 + se / emp) * at(&raw.compensation, i) / p;
        if w >= y {
            return Err(Error::NonPositiveProfit {
                year,
                wage_bill: w,
                output: y,
            });
        }
        let l = emp + se;
        let labor_force = l + at(&raw.unemployed, i);
        let capital = at(&raw.net_capital_stock, i);
        if capital == 0.0 {
            return Err(Error::DivisionDomain {
                quantity: "capital stock",
                year,
            });
        }
        let profit = y - w;
        let pk = match k_deflator {
            KDeflator::Gdp => p,
            KDeflator::Investment => at(&raw.investment_deflator, i),
        };
        let row = [
            y,
            w,
            l,
            labor_force,
            w / y,
            l / labor_force,
            w / l,
            y / l,
            capital / y,
            at(&raw.consumption_fixed_capital, i) / (at(&raw.investment_deflator, i) * capital),
            at(&raw.gross_capital_formation, i) / pk / profit,
            profit / capital,
        ];
        for (c, v) in cols.iter_mut().zip(row) {
            c.push(v);
        }
    }
    let [y, w_bill, l, n_, omega, lambda, wage_rate, productivity, nu, delta, k_rate, r] = cols;
    let mk = |label: &str, v: Vec<f64>| AnnualSeries::new(label, start, v);
    Ok(DerivedSeries {
        country: raw.country.clone(),
        y: mk("Y", y)?,
        w_bill: mk("W", w_bill)?,
        l: mk("L", l)?,
        n: mk("N", n_)?,
        omega: mk("omega", omega)?,
        lambda: mk("lambda", lambda)?,
        wage_rate: mk("w", wage_rate)?,
        productivity: mk("a", productivity)?,
        nu: mk("nu", nu)?,
        delta: mk("delta", delta)?,
        k_rate: mk("k", k_rate)?,
        r: mk("r", r)?,
    })
}

/// Sample means `(mean ω, mean λ)`.
pub fn empirical_means(d: &DerivedSeries) -> Result<(f64, f64)> {
    if d.is_empty() {
        return Err(Error::EmptySeries);
    }
    Ok((d.omega.mean(), d.lambda.mean()))
}
