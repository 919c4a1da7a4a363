use anyhow::{bail, Context, Result};

/// Values of `n` described by `n=START:END:log` (one per decade) or `n=START:END:STEP`.
pub fn parse_sweep(spec: &str) -> Result<Vec<usize>> {
    let body = spec.strip_prefix("n=").context("sweep must look like n=START:END:log or n=START:END:STEP")?;
    let parts: Vec<&str> = body.split(':').collect();
    let [start, end, step] = parts[..] else {
        bail!("sweep needs three fields, got {body:?}");
    };
    let start: usize = start.parse().with_context(|| format!("bad sweep start {start:?}"))?;
    let end: usize = end.parse().with_context(|| format!("bad sweep end {end:?}"))?;
    if start == 0 || end < start {
        bail!("sweep needs 0 < START <= END");
    }
    let mut out = Vec::new();
    if step == "log" {
        let mut n = start;
        while n <= end {
            out.push(n);
            n = n.checked_mul(10).context("sweep overflow")?;
        }
    } else {
        let step: usize = step.parse().with_context(|| format!("bad sweep step {step:?}"))?;
        if step == 0 {
            bail!("sweep step must be positive");
        }
        out.extend((start..=end).step_by(step));
    }
    Ok(out)
}
