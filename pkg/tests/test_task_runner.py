import pytest

from app.view.task_runner import BatchTask, TaskCancelled, make_runner


def test_results_keep_input_order():
    progress = []
    task = BatchTask(abs, [-1, 2, -3], description='abs')
    assert task.run(progress.append) == [1, 2, 3]
    assert progress == [33, 66, 100]


def test_process_pool_keeps_order():
    assert BatchTask(abs, [-4, 5, -6, 7], jobs=2).run() == [4, 5, 6, 7]


def test_cancel_before_run():
    task = BatchTask(abs, [1, 2])
    task.cancel()
    assert task.is_cancelled
    with pytest.raises(TaskCancelled):
        task.run()


def test_cancel_during_run():
    seen = []

    def job(x):
        seen.append(x)
        if x == 2:
            task.cancel()
        return x

    task = BatchTask(job, [1, 2, 3])
    with pytest.raises(TaskCancelled):
        task.run()
    assert seen == [1, 2]


def test_jobs_must_be_positive():
    with pytest.raises(ValueError):
        BatchTask(abs, [1], jobs=0)


def test_make_runner():
    runner = make_runner(1, 'abs')
    assert runner(abs, [-2, -1]) == [2, 1]
    assert runner(abs, []) == []
