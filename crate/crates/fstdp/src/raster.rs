use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::ops::Range;
use std::path::Path;

use crate::error::{Error, Result};

/// Dense binary event matrix: `n_channels` input processes observed over
/// `n_steps` discrete time steps. Entry (channel, step) is 1 when the channel
/// emitted an event on that step.
///
/// Storage is row-major (one contiguous run per channel), which keeps
/// channel-wise statistics cheap; simulation code that walks step by step
/// should build [`SpikeRaster::events_by_step`] once instead of striding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpikeRaster {
    n_channels: usize,
    n_steps: usize,
    events: Vec<u8>,
}

impl SpikeRaster {
    pub fn new(n_channels: usize, n_steps: usize) -> Self {
        SpikeRaster {
            n_channels,
            n_steps,
            events: vec![0; n_channels * n_steps],
        }
    }

    pub fn n_channels(&self) -> usize {
        self.n_channels
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    #[inline]
    pub fn get(&self, channel: usize, step: usize) -> bool {
        self.events[channel * self.n_steps + step] != 0
    }

    #[inline]
    pub fn set(&mut self, channel: usize, step: usize, value: bool) {
        self.events[channel * self.n_steps + step] = value as u8;
    }

    /// One channel's full event row.
    pub fn channel(&self, channel: usize) -> &[u8] {
        &self.events[channel * self.n_steps..(channel + 1) * self.n_steps]
    }

    pub fn spike_count(&self, channel: usize) -> usize {
        self.channel(channel).iter().map(|&e| e as usize).sum()
    }

    pub fn total_spikes(&self) -> usize {
        self.events.iter().map(|&e| e as usize).sum()
    }

    /// Per-step event probability of one channel.
    pub fn mean_rate(&self, channel: usize) -> f64 {
        self.spike_count(channel) as f64 / self.n_steps as f64
    }

    /// Guard used when normalizing by per-channel means: a channel whose
    /// estimated rate is below one event per observation window is treated
    /// as silent rather than dividing by a vanishing mean.
    pub fn default_epsilon_rate(&self) -> f64 {
        1.0 / self.n_steps as f64
    }

    /// Channel indices that fire on each step, in ascending order.
    pub fn events_by_step(&self) -> Vec<Vec<u32>> {
        let mut by_step: Vec<Vec<u32>> = vec![Vec::new(); self.n_steps];
        for ch in 0..self.n_channels {
            let row = self.channel(ch);
            for (t, &e) in row.iter().enumerate() {
                if e != 0 {
                    by_step[t].push(ch as u32);
                }
            }
        }
        by_step
    }

    /// Copy of a contiguous step window across all channels.
    pub fn window(&self, steps: Range<usize>) -> SpikeRaster {
        assert!(steps.end <= self.n_steps, "window out of range");
        let mut out = SpikeRaster::new(self.n_channels, steps.len());
        for ch in 0..self.n_channels {
            let src = &self.channel(ch)[steps.clone()];
            out.events[ch * steps.len()..(ch + 1) * steps.len()].copy_from_slice(src);
        }
        out
    }

    /// Writes the sparse CSV form: a `# n_channels,n_steps` preamble, a
    /// `channel,step,value` header, then one row per event.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        let io_err = |e| Error::io(path, e);
        writeln!(w, "# {},{}", self.n_channels, self.n_steps).map_err(io_err)?;
        writeln!(w, "channel,step,value").map_err(io_err)?;
        for ch in 0..self.n_channels {
            for (t, &e) in self.channel(ch).iter().enumerate() {
                if e != 0 {
                    writeln!(w, "{},{},1", ch, t).map_err(io_err)?;
                }
            }
        }
        w.flush().map_err(io_err)
    }

    /// Reads the format produced by [`SpikeRaster::write_csv`].
    pub fn read_csv(path: impl AsRef<Path>) -> Result<SpikeRaster> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut lines = BufReader::new(file).lines().enumerate();

        let parse = |line: usize, message: String| Error::Parse {
            line: line as u64 + 1,
            message,
        };

        let (line_no, preamble) = lines
            .next()
            .ok_or_else(|| parse(0, "empty raster file".into()))?;
        let preamble = preamble.map_err(|e| Error::io(path, e))?;
        let dims = preamble
            .strip_prefix('#')
            .ok_or_else(|| parse(line_no, "expected `# n_channels,n_steps` preamble".into()))?
            .trim();
        let mut it = dims.split(',');
        let n_channels: usize = it
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| parse(line_no, format!("bad preamble dimensions {dims:?}")))?;
        let n_steps: usize = it
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| parse(line_no, format!("bad preamble dimensions {dims:?}")))?;

        let (line_no, header) = lines
            .next()
            .ok_or_else(|| parse(1, "missing `channel,step,value` header".into()))?;
        let header = header.map_err(|e| Error::io(path, e))?;
        if header.trim() != "channel,step,value" {
            return Err(parse(line_no, format!("unexpected header {header:?}")));
        }

        let mut raster = SpikeRaster::new(n_channels, n_steps);
        for (line_no, line) in lines {
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split(',');
            let mut field = |name: &str| {
                fields
                    .next()
                    .map(str::trim)
                    .ok_or_else(|| parse(line_no, format!("missing {name} column")))
            };
            let channel: usize = field("channel")?
                .parse()
                .map_err(|_| parse(line_no, format!("bad channel in {line:?}")))?;
            let step: usize = field("step")?
                .parse()
                .map_err(|_| parse(line_no, format!("bad step in {line:?}")))?;
            let value: u8 = field("value")?
                .parse()
                .map_err(|_| parse(line_no, format!("bad value in {line:?}")))?;
            if channel >= n_channels || step >= n_steps {
                return Err(parse(
                    line_no,
                    format!(
                        "event ({channel},{step}) outside {n_channels}x{n_steps} raster"
                    ),
                ));
            }
            if value > 1 {
                return Err(parse(line_no, format!("event value must be 0 or 1, got {value}")));
            }
            if value == 1 {
                raster.set(channel, step, true);
            }
        }
        Ok(raster)
    }
}
